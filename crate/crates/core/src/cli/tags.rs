//! Values of the `paper_ref` report column.

pub const BIORTHOGONAL: &str = "prop:e";
pub const BASIS_NORM: &str = "fact:q";
pub const DUAL_SUP: &str = "fact:f";
pub const CLASSICAL_GAMMA: &str = "ex:classical";
pub const DOUBLING: &str = "lem:doubling";
pub const MILESTONES: &str = "eq:ChoosingGamma";
pub const GROWTH: &str = "cor:potential";
pub const QUASI_GREEDY: &str = "thm:QG";
pub const DEMOCRACY: &str = "prop:dem";
pub const TRUNCATION: &str = "lem:RTO";
pub const SUCC: &str = "lem:PWF";
pub const LEBESGUE: &str = "eq:LebEstimates";
pub const UPPER: &str = "prop:upper";
pub const LOWER: &str = "prop:lower";
pub const MAIN: &str = "thm:main";
pub const ENVELOPE: &str = "thm:EstimateCC";
pub const COLUMN: &str = "lem:lpnormcolumn";
pub const BLOCK_SUM: &str = "lem:blocksum";
pub const LQ_SUM: &str = "lem:lqsum";
pub const KERNEL: &str = "fact:c";
pub const ISOMETRY: &str = "fact:b";
pub const CONTRACTION: &str = "fact:d";
pub const QUOTIENT: &str = "thm:quotient";
pub const EMBEDDING: &str = "prop:f";
pub const ISOMORPHISM: &str = "cor:isomorphism";
pub const DIRECT_SUM: &str = "thm:Baseslp";
pub const DUAL_LOWER: &str = "lem:lowerestimatedualbasis";
pub const DUAL_DEMOCRACY: &str = "lem:bounddualdemocracy";
pub const NORMING: &str = "prop:normingco";
