pub mod exactarith;
pub mod finmod;
pub mod hall;
pub mod orders;
pub mod qha;
pub mod zeta;
