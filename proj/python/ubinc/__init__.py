"""Delay bounds for device-edge-cloud compute loops.

Thin re-export of the compiled core. Curve algebra, tandem delay
bounds, fading-channel bounds, and config-driven scenario analysis.
"""

from ._core import (
    AnalysisMode,
    ConfigError,
    ConstantSnr,
    Curve,
    CurveSegment,
    DelayReport,
    FadingChannel,
    InstabilityError,
    NodeRole,
    RateLatency,
    RayleighSnr,
    SnrArrival,
    SweepRow,
    Tandem,
    TandemNode,
    ThetaSearch,
    TokenBucket,
    TSpec,
    analyze_config,
    analyze_config_text,
    case1_delay,
    case2_delay,
    delay_quantile,
    delay_violation_bound,
    e2e_service_curve,
    h_dev,
    mellin_rayleigh,
    min_plus_conv,
    min_plus_deconv,
    sweep_config,
    sweep_config_text,
    v_dev,
)

__all__ = [
    "AnalysisMode",
    "ConfigError",
    "ConstantSnr",
    "Curve",
    "CurveSegment",
    "DelayReport",
    "FadingChannel",
    "InstabilityError",
    "NodeRole",
    "RateLatency",
    "RayleighSnr",
    "SnrArrival",
    "SweepRow",
    "Tandem",
    "TandemNode",
    "ThetaSearch",
    "TokenBucket",
    "TSpec",
    "analyze_config",
    "analyze_config_text",
    "case1_delay",
    "case2_delay",
    "delay_quantile",
    "delay_violation_bound",
    "e2e_service_curve",
    "h_dev",
    "mellin_rayleigh",
    "min_plus_conv",
    "min_plus_deconv",
    "sweep_config",
    "sweep_config_text",
    "v_dev",
]
