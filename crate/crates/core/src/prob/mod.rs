//! Exact finite-probability machinery: alphabets, distributions, channels,
//! the system model, joint assembly and entropy kernels (all in bits).

mod dist;
mod joint;
mod model;
mod scalar;

pub use dist::{Alphabet, Channel, CostFunction, Distribution, PROB_TOLERANCE};
pub use joint::{
    assemble_joint, clamp_info, conditional_entropy, entropy, mutual_information, var,
    JointDistribution, MarginalPlan, MAX_ATOMS, NEGATIVE_SLACK,
};
pub use model::{AuxiliaryChoice, MeasurementChannel, Mode, SystemModel};
pub use scalar::{
    binary_entropy, binary_entropy_inverse, bisect_increasing, star, xlog2x_neg,
    INVERSE_TOLERANCE, MAX_BISECTION_ITERS,
};

pub(crate) use joint::{fill_joint, joint_layout, plan_for};
pub(crate) use scalar::{conv, hb};
