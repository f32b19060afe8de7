//! Smooth complete varieties with explicit Chow rings, structural morphisms
//! between them, and the fiber squares the catalogue can represent.

mod bundle;
mod fiber;
mod morphism;
mod variety;

pub use bundle::BundleClass;
pub use fiber::{fiber_product, FiberSquare};
pub use morphism::{
    blow_down, bundle_projection, center_embedding, compose, exceptional_divisor,
    exceptional_inclusion, factor_automorphisms, factor_projection, identity, linear_embedding,
    pairing, product_map, product_projection, product_with_projections, projectivize, to_point,
    try_compose, zero_section, Morphism, MorphismKind, MorphismModel, ProductData,
    ProjectiveBundle,
};
pub use variety::{
    make_blowup_linear, make_point, make_product, make_product_list, make_proj, make_proj_bundle,
    Construction, Variety, VarietyModel,
};
