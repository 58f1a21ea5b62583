//! Exact algebra and certificate checks for del Pezzo fibrations built from
//! the Klein quartic in bigraded toric ambients.

pub mod exactfield;
pub mod polyring;
pub mod coxtoric;
pub mod singular;
pub mod critical;
pub mod kollar;
pub mod oracle;
pub mod pipeline;
