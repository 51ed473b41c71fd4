#!/usr/bin/env python3
"""
Runtime configuration for the stringy invariants tools

Defaults can be overridden by STRINGY_* environment variables and then by
command-line flags.
"""

import logging
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional

MODES = ('local', 'global')
OUTPUTS = ('text', 'json')

LOG_FORMAT = '%(asctime)s - %(levelname)s - %(message)s'


@dataclass
class ComputeConfig:
    """Options shared by every command"""
    q_order: int = 3
    mode: str = 'local'
    output: str = 'text'
    log_level: str = 'WARNING'
    log_file: Optional[str] = None
    metrics_file: Optional[str] = None
    corpus_dir: Optional[str] = None
    verification_seed: int = 20240601
    random_cases: int = 100
    extra_handlers: List[logging.Handler] = field(default=None, repr=False)

    def __post_init__(self):
        if self.corpus_dir is None:
            self.corpus_dir = str(Path(__file__).resolve().parent / 'corpus')
        if self.extra_handlers is None:
            self.extra_handlers = []
        if self.q_order < 0:
            raise ValueError(f"q-order must be nonnegative, got {self.q_order}")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.output not in OUTPUTS:
            raise ValueError(f"output must be one of {OUTPUTS}, got {self.output!r}")

    @classmethod
    def from_env(cls, **overrides) -> 'ComputeConfig':
        env = {
            'q_order': os.environ.get('STRINGY_Q_ORDER'),
            'log_level': os.environ.get('STRINGY_LOG_LEVEL'),
            'log_file': os.environ.get('STRINGY_LOG_FILE'),
            'metrics_file': os.environ.get('STRINGY_METRICS_FILE'),
            'corpus_dir': os.environ.get('STRINGY_CORPUS_DIR'),
        }
        values = {k: v for k, v in env.items() if v}
        if 'q_order' in values:
            values['q_order'] = int(values['q_order'])
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)


def configure_logging(config: ComputeConfig):
    """Log to stderr so stdout carries only results"""
    handlers: List[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    if config.log_file:
        handlers.append(logging.FileHandler(config.log_file))
    handlers.extend(config.extra_handlers)
    logging.basicConfig(
        level=getattr(logging, config.log_level.upper(), logging.WARNING),
        format=LOG_FORMAT,
        handlers=handlers,
        force=True,
    )
