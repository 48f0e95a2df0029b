"""MSE-optimal nonuniform resampling, reconstruction and coding of 1-D signals.

The toolkit resamples densely gridded signals onto adaptive segmentations
whose boundaries concentrate where the derivative energy does, reconstructs
piecewise-constant approximations from segmentation times plus extrema
alone, codes the whole description into a compact bitstream, and evaluates
the theory side: density-driven error integrals, their optimal-density
minimum, the quantization duality, and the K-dimensional bounds.
"""

from .bench import BenchConfig, bench_codec, bench_sampling, default_mu_grid
from .codec import (
    CodecConfig,
    choose_b_diff,
    decode_descriptor,
    decode_monotone,
    dequantize_uniform,
    encode_descriptor,
    encode_monotone,
    quantize_uniform,
)
from .duality import (
    PdfGrid,
    QuantizerSpec,
    design_quantizer_via_sampling,
    pdf_from_signal,
    quantizer_bennett_mse,
    signal_from_pdf,
)
from .errors import DecodeError, DegenerateSignalError, EncodingError, ResolutionError
from .estimators import NonuniformResampler, TreeResampler
from .multidim import (
    INTERVAL_INERTIA,
    GradientField,
    bennett_mse_kd,
    gradient_field_from_csv,
    mse_lower_bound_kd,
    optimal_density_kd,
)
from .reconstruction import (
    QuadCoeffs,
    SamplerDescriptor,
    describe,
    fit_left_quadratic,
    fit_right_quadratic,
    infer_derivative,
    reconstruct,
)
from .sampling import (
    PiecewiseConstant,
    bennett_mse,
    empirical_mse,
    optimal_samples,
    panter_dite_mse,
)
from .segmentation import (
    DERIVATIVE_ENERGY_FLOOR,
    Segmentation,
    ThresholdResult,
    compressor,
    cube_root_mass,
    optimal_density,
    segment_by_expander,
    segment_by_threshold,
    uniform_segmentation,
)
from .signals import (
    AnalyticSignalSpec,
    ExtremaList,
    UniformSignal,
    derivative,
    find_extrema,
    generate,
    parse_signal_spec,
    signal_from_csv,
)
from .tree import (
    DyadicTree,
    build_full_tree,
    prune,
    rate_distortion_sweep,
    tree_rate_bits,
    tree_sample,
)

__version__ = "0.1.0"

__all__ = [
    "AnalyticSignalSpec",
    "BenchConfig",
    "CodecConfig",
    "DERIVATIVE_ENERGY_FLOOR",
    "DecodeError",
    "DegenerateSignalError",
    "DyadicTree",
    "EncodingError",
    "ExtremaList",
    "GradientField",
    "INTERVAL_INERTIA",
    "NonuniformResampler",
    "PdfGrid",
    "PiecewiseConstant",
    "QuadCoeffs",
    "QuantizerSpec",
    "ResolutionError",
    "SamplerDescriptor",
    "Segmentation",
    "ThresholdResult",
    "TreeResampler",
    "UniformSignal",
    "bench_codec",
    "bench_sampling",
    "bennett_mse",
    "bennett_mse_kd",
    "build_full_tree",
    "choose_b_diff",
    "compressor",
    "cube_root_mass",
    "decode_descriptor",
    "decode_monotone",
    "default_mu_grid",
    "dequantize_uniform",
    "derivative",
    "describe",
    "design_quantizer_via_sampling",
    "empirical_mse",
    "encode_descriptor",
    "encode_monotone",
    "find_extrema",
    "fit_left_quadratic",
    "fit_right_quadratic",
    "generate",
    "gradient_field_from_csv",
    "infer_derivative",
    "mse_lower_bound_kd",
    "optimal_density",
    "optimal_density_kd",
    "optimal_samples",
    "panter_dite_mse",
    "parse_signal_spec",
    "pdf_from_signal",
    "prune",
    "quantize_uniform",
    "quantizer_bennett_mse",
    "rate_distortion_sweep",
    "reconstruct",
    "segment_by_expander",
    "segment_by_threshold",
    "signal_from_csv",
    "signal_from_pdf",
    "tree_rate_bits",
    "tree_sample",
    "uniform_segmentation",
]
