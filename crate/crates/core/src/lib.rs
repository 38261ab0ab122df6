pub mod analyze;
pub mod cli;
pub mod construct;
pub mod gluing;
pub mod intlat;
pub mod model;
pub mod verify;
