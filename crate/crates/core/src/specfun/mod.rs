//! Scalar special functions: normal pdf/cdf/quantile, Owen's T, the
//! bivariate normal cdf, the skew-normal cdf and the regularized incomplete
//! gamma function with its inverse.

mod bivariate;
mod gamma;
mod normal;
mod owen;

pub use bivariate::{bvn_cdf, bvn_origin, skew_norm_cdf};
pub(crate) use bivariate::bvn_excess;
pub use gamma::{ln_gamma, reg_gamma_lower, reg_gamma_lower_inv, reg_gamma_upper, reg_gamma_upper_inv};
pub(crate) use gamma::gamma_inv_pq;
pub use normal::{norm_cdf, norm_pdf, norm_quantile, norm_sf};
pub(crate) use normal::norm_quantile_unchecked;
pub use owen::owen_t;
