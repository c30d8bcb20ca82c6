"""Div-curl and commutator estimates on the periodic torus.

Fields are complex128 numpy arrays. A scalar field on a grid with ``n``
points per axis in ``d`` dimensions has shape ``(n,) * d``; a vector field
carries a leading component axis.
"""

import json

from ._divcurl import (
    ConfigError,
    commutator_singular_values,
    curl_residual,
    cwikel_singular_values,
    divergence,
    divergence_residual,
    dual_certify,
    dual_norm_h1,
    experiment_names,
    fractional_laplacian,
    gradient,
    leray_project,
    lorentz_q1_norm,
    lp_norm,
    lp_norm_vector,
    make_u,
    neg_sobolev_proxy,
    riesz,
    weak_lp_functional,
)
from . import _divcurl


def parse_config(text):
    """Validate TOML config text and return its normalized form as a dict."""
    return json.loads(_divcurl.parse_config(text))


def run_config(text, jobs=1):
    """Run the experiment described by TOML text and return the record dict."""
    return json.loads(_divcurl.run_config(text, jobs))


def run_to_directory(text, out, jobs=1):
    """Run and write record.json, series.csv and summary.txt; returns the exit code."""
    return _divcurl.run_to_directory(text, str(out), jobs)


__all__ = [
    "ConfigError",
    "commutator_singular_values",
    "curl_residual",
    "cwikel_singular_values",
    "divergence",
    "divergence_residual",
    "dual_certify",
    "dual_norm_h1",
    "experiment_names",
    "fractional_laplacian",
    "gradient",
    "leray_project",
    "lorentz_q1_norm",
    "lp_norm",
    "lp_norm_vector",
    "make_u",
    "neg_sobolev_proxy",
    "parse_config",
    "riesz",
    "run_config",
    "run_to_directory",
    "weak_lp_functional",
]
