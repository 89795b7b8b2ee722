pub mod canned;
pub mod constraints;
pub mod twosat;
pub mod untangle;
