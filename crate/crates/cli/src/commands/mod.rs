pub mod asymptotics;
pub mod contour;
pub mod count;
pub mod misc;
pub mod verify;
