pub mod convergents;
pub mod equiv;
pub mod ergodicity;
pub mod l1demo;
pub mod singular;
pub mod trivialize;
