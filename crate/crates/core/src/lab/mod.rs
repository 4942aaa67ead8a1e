//! Decision procedures for matrices over local fields and `Q`.

pub mod bounds;
pub mod exponent;
pub mod roots;
pub mod tower;
pub mod unipotent;
pub mod verdict;

pub use bounds::{torsion_exponent_bound, unipotent_power_bound, ExponentBound, ExtensionProfile};
pub use exponent::{
    cyclic_root, cyclic_root_exponent, eigenvalue_congruence_check, is_distal,
    unipotent_power_exponent, CyclicClosure, Order,
};
pub use unipotent::{
    is_unipotent, nilpotent_exponential, one_parameter_sample, unipotent_kth_root, unipotent_log,
};
pub use roots::{has_kth_root, RootStatus, RootVerdict};
pub use tower::{cyclic_tower, unipotent_tower, verify_tower, TowerWitness};
pub use verdict::{roots_all_orders, AllOrdersVerdict, Certificate};
