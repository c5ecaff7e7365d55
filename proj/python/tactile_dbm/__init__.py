"""Deep Boltzmann machine model of tactile hallucinations on a 3x6 skin."""

from ._tactile import (
    CapacityError,
    Config,
    ConfigError,
    DbmParams,
    IoError,
    ParseError,
    UndefinedCorrelation,
    clamp_and_infer,
    decode,
    decode_performance,
    dice,
    format_patterns,
    homeostasis_trial,
    mask,
    parse_patterns,
    pearson,
    performance_q,
    read_checkpoint,
    run_homeostasis,
    run_scenarios,
    run_train,
    sample,
    score_trial,
    simulate_skin,
    train_trial,
    triangle_dataset,
    write_checkpoint,
)

__version__ = "0.1.0"
