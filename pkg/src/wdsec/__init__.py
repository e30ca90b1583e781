"""Waveform-defined security toolkit.

Simulation stack for compressed-spectrum multicarrier signaling:
band-plan construction and modulation, channel models, matched/ZF/sphere
detection, chaotic pattern-key generation, Monte-Carlo evaluation, and
labeled IQ dataset export.
"""
from .channel import ChannelModel, ChannelState, apply, equalize, exponential_taps
from .detection import (
    DemodObservation,
    DetectionResult,
    SdWorkspace,
    demodulate,
    demodulate_nearest_bin,
    detect_multiband,
    fft_complexity,
    mf_decide,
    sd_complexity_bound,
    sphere_decode,
    zf_decide,
)
from .harness import BerCurve, BerPoint, BerReport, ClassifierStub, ExperimentSpec, run_ber
from .keygen import (
    ChaoticState,
    KeyExhaustedError,
    KeyQuantizer,
    PatternKeyStream,
    emit_keys,
    next_state,
    paired_check,
)
from .metrics import PowerModelParams, accuracy_approx, max_classes, power, sca, wilson_interval
from .patterns import pattern_plans, plan_by_name
from .waveform import (
    BandPlan,
    ComplexSignal,
    CorrelationMatrix,
    SubBand,
    WaveformConfig,
    build_amb_plan,
    build_mamb_plan,
    build_mb_plan,
    build_sb_plan,
    correlation_matrix,
    effective_beta,
    modulate,
    modulate_multi_band,
    modulate_single_band,
    multi_band_plan,
    occupied_bandwidth,
    se_gain,
)

__version__ = "0.1.0"
