pub mod ring;
pub mod groups;
pub mod cohomology;
pub mod deformation;
pub mod hypothesis;
pub mod repn;
pub mod report;
