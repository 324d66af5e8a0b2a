"""Utility functions for haarint.

This module contains helpers for logging, configuration, work chunking and
index-label normalization shared by the engine, the Monte-Carlo verifier and
the command-line front end.
"""

import os
import copy
import logging
from pathlib import Path
from typing import Any, Dict, Hashable, Iterable, List, Optional, Tuple, Union

import yaml
from dotenv import load_dotenv

DEFAULT_CONFIG: Dict[str, Dict[str, Any]] = {
    "engine": {
        "degree_cap": 8,
        "max_products": 5_000_000,
    },
    "montecarlo": {
        "samples": 1_000_000,
        "chunk_size": 50_000,
        "batch_size": 10_000,
        "threshold": 5.0,
        "seed": 0,
        "jobs": 1,
    },
    "output": {
        "format": "text",
        "latex": False,
    },
    "logging": {
        "level": "INFO",
        "file": None,
    },
}

# Environment variable -> (section, key, type)
ENV_OVERRIDES = {
    "HAARINT_LOG_LEVEL": ("logging", "level", str),
    "HAARINT_SEED": ("montecarlo", "seed", int),
    "HAARINT_JOBS": ("montecarlo", "jobs", int),
}


def setup_logging(log_level: str = "INFO", log_file: Optional[Union[str, Path]] = None) -> logging.Logger:
    """Set up logging configuration.

    Results go to stdout, so log records are sent to stderr and, when
    requested, to a file under a ``logs`` directory.

    Args:
        log_level: The logging level name (default: INFO).
        log_file: Optional path of a log file; its directory is created.

    Returns:
        The configured "haarint" logger.
    """
    log_format = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
    handlers: List[logging.Handler] = [logging.StreamHandler()]
    if log_file:
        log_path = Path(log_file)
        log_path.parent.mkdir(parents=True, exist_ok=True)
        handlers.append(logging.FileHandler(log_path))

    logging.basicConfig(
        level=getattr(logging, str(log_level).upper(), logging.INFO),
        format=log_format,
        handlers=handlers,
        force=True,
    )
    return logging.getLogger("haarint")


def load_config(config_path: Union[str, Path, None] = "config.yaml") -> Dict[str, Dict[str, Any]]:
    """Load configuration from a YAML file merged over the defaults.

    Environment variables (optionally read from a ``.env`` file) override
    file values.

    Args:
        config_path: Path to the configuration file.

    Returns:
        A dictionary of configuration sections.
    """
    config = copy.deepcopy(DEFAULT_CONFIG)

    if config_path is not None:
        config_path = Path(config_path)
        if not config_path.exists():
            logging.warning(f"Config file not found: {config_path}. Using default configuration.")
        else:
            try:
                with open(config_path, "r", encoding="utf-8") as f:
                    loaded = yaml.safe_load(f) or {}
            except Exception as e:
                logging.error(f"Error loading config from {config_path}: {str(e)}")
                raise
            for section, values in loaded.items():
                if isinstance(values, dict):
                    config.setdefault(section, {}).update(values)
                else:
                    logging.warning(f"Ignoring non-mapping config section: {section}")

    load_dotenv()
    for variable, (section, key, cast) in ENV_OVERRIDES.items():
        raw = os.environ.get(variable)
        if raw:
            try:
                config[section][key] = cast(raw)
            except ValueError:
                logging.warning(f"Ignoring malformed {variable}={raw!r}")

    return config


def split_samples(samples: int, chunk_size: int) -> List[int]:
    """Split a sample count into chunk sizes.

    Every chunk is ``chunk_size`` long except possibly the last, so the split
    depends only on the two arguments and never on the number of workers.

    Args:
        samples: Total number of samples.
        chunk_size: Maximum number of samples per chunk.

    Returns:
        A list of chunk sizes summing to ``samples``.
    """
    if chunk_size < 1:
        raise ValueError("chunk_size must be positive")
    full, rest = divmod(samples, chunk_size)
    chunks = [chunk_size] * full
    if rest:
        chunks.append(rest)
    return chunks


def normalize_labels(labels: Iterable[Hashable]) -> Tuple[Tuple[int, ...], Dict[Hashable, int]]:
    """Relabel values to 1..k in first-occurrence order.

    Args:
        labels: The label sequence.

    Returns:
        The relabeled sequence and the mapping that produced it.
    """
    mapping: Dict[Hashable, int] = {}
    relabeled = []
    for label in labels:
        if label not in mapping:
            mapping[label] = len(mapping) + 1
        relabeled.append(mapping[label])
    return tuple(relabeled), mapping
