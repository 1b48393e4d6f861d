"""Blended GEV distribution, quantile parametrisation and P3C shape priors."""

from .bgev import (
    BlendConfig,
    BlendDerived,
    bgev_cdf,
    bgev_logpdf,
    bgev_pdf,
    bgev_pdf_derivs,
    bgev_quantile,
    bgev_sample,
    derive_blend,
    weight,
)
from .gev import (
    ClassicParams,
    QuantileParams,
    frechet_block_max_params,
    gev_cdf,
    gev_cdf_q,
    gev_logpdf,
    gev_pdf,
    gev_quantile,
    gev_quantile_q,
    gev_sample,
    to_classic,
    to_quantile,
)
from .numerics import BetaShape

__version__ = "0.1.0"
