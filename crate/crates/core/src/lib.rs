//! Enumeration of totally ramified extensions of p-adic fields.
//!
//! Given a base field `K` (a finite extension of Q_p described as a tower),
//! a degree `n`, and a discriminant exponent, this crate computes a minimal
//! set of Eisenstein polynomials generating all totally ramified extensions
//! of `K` of degree `n` with that discriminant, organized by ramification
//! polygon and residual-polynomial invariants.
//!
//! The main entry points are:
//! - [`polygon::enumerate_polygons`]: all valid ramification polygons for a
//!   degree and discriminant exponent,
//! - [`residual::enumerate_residual_tuples`] and [`residual::partition_star`]:
//!   the residual-polynomial invariants attached to a polygon,
//! - [`template::build_template`]: the coefficient template describing a
//!   reduced set of Eisenstein polynomials for one invariant class,
//! - [`enumerate::all_extensions`]: the full pipeline, including the
//!   root-counting filter that removes generators of isomorphic fields,
//! - [`roots::count_roots`]: Krasner-style root counting used both for the
//!   filter and for automorphism counts.

pub mod enumerate;
pub mod error;
pub mod residue;
pub mod field;
pub mod polygon;
pub mod residual;
pub mod roots;
pub mod template;

pub use error::{Error, Result};
pub use residue::{
    additive_map_analysis, AdditiveMap, AdditiveMapAnalysis, ResidueElem, ResidueField,
};
pub use field::{LocalField, OkElem, Valuation};
pub use polygon::{
    enumerate_polygons, krasner_precision, ore_range, polygon_of_int_polynomial,
    polygon_of_valuations, polygon_sort_key, validate_polygon, PolygonCheck, PolygonPoint,
    PolygonViolation, RamPolygon, Segment,
};
pub use residual::{
    aut_upper_bound, component_residual, delta_action, enumerate_residual_tuples,
    max_component_slope, orbit, partition_star, validate_residuals, ComponentResidual,
    InvariantOrbit, ResidualCheck, ResidualTuple, ResidualViolation,
};
pub use template::{
    build_template, residuals_of_polynomial, template_count, template_stream, Cell, CellTag,
    CoeffTemplate, EisPoly, Guarantee, TemplateStream,
};
pub use template::uniqueness_guarantee;
pub use roots::{
    aut_count, count_roots, count_roots_auto, eval_poly, ext_add, ext_mul, filter_minimal,
    same_extension, ExtElem, FilterOutcome,
};
pub use enumerate::{
    all_extensions, all_extensions_by_disc, all_extensions_for_polygon, count_extensions,
    count_extensions_by_disc, count_extensions_for_polygon, invariant_orbits, run_job, summarize,
    EnumOptions, EnumerationJob, EnumerationOutcome, ExtensionRecord, Selector, SummaryRow,
};
