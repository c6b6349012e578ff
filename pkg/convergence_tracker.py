#!/usr/bin/env python3
"""
Convergence tracking utility to record and fit geometric decay along a sequence.
"""

import gc
import logging
import os
import time
from dataclasses import dataclass
from datetime import datetime

import numpy as np
import pandas as pd
import psutil

from settings import DEFAULTS

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GeometricFit:
    """value ~ C * rate**level on the fitted points."""
    C: float
    rate: float
    rms_residual: float
    points: int


class ConvergenceTracker:
    """Track a quantity over the levels of an iteration."""

    def __init__(self, label="run", noise_floor=DEFAULTS.noise_floor, sample_memory=False):
        """Initialize the convergence tracker.

        Args:
            label: String identifier for this tracking session
            noise_floor: Values at or below this are left out of fits
            sample_memory: Collect garbage and read the resident set size at
                every sample; memory_mb is NaN otherwise
        """
        self.label = label
        self.noise_floor = noise_floor
        self.sample_memory = sample_memory
        self.process = psutil.Process(os.getpid()) if sample_memory else None
        self.levels = []
        self.values = []
        self.timestamps = []
        self.memory_usage = []
        self.start_time = time.time()

    def record(self, level, value):
        """Record one sample with its elapsed time (and resident memory when sampled)."""
        if self.sample_memory:
            gc.collect()
            memory_mb = self.process.memory_info().rss / (1024 * 1024)
        else:
            memory_mb = float("nan")
        self.levels.append(int(level))
        self.values.append(float(value))
        self.timestamps.append(time.time() - self.start_time)
        self.memory_usage.append(memory_mb)

    def fit_geometric(self, skip=0, window=1):
        """Least-squares line through log(value) against level.

        Args:
            skip: Number of leading samples to ignore (pre-asymptotic regime)
            window: Fit the moving average of ``window`` consecutive log
                values (and levels). A window of 2 cancels a modulation that
                alternates between even and odd levels; the rate of a purely
                geometric sequence is unchanged.

        Returns:
            GeometricFit, or None when fewer than two (averaged) samples lie
            above the noise floor.
        """
        if window < 1:
            raise ValueError(f"window must be >= 1, got {window}")
        levels = np.array(self.levels[skip:], dtype=float)
        values = np.abs(np.array(self.values[skip:], dtype=float))
        keep = values > self.noise_floor
        if keep.sum() < window + 1:
            return None
        levels, logs = levels[keep], np.log(values[keep])

        tail = values[keep]
        if np.any(np.diff(tail) > 0.0):
            logger.warning("%s: non-monotone tail above the noise floor %.1e", self.label,
                           self.noise_floor)

        if window > 1:
            kernel = np.full(window, 1.0 / window)
            levels = np.convolve(levels, kernel, mode="valid")
            logs = np.convolve(logs, kernel, mode="valid")
        z = np.polyfit(levels, logs, 1)
        residual = logs - np.poly1d(z)(levels)
        return GeometricFit(C=float(np.exp(z[1])), rate=float(np.exp(z[0])),
                            rms_residual=float(np.sqrt(np.mean(residual ** 2))),
                            points=int(levels.size))

    def to_frame(self):
        return pd.DataFrame({
            "level": self.levels,
            "value": self.values,
            "timestamp": self.timestamps,
            "memory_mb": self.memory_usage,
        })

    def save_data(self, filename=None):
        """Save the recorded series to a CSV file.

        Args:
            filename: Optional filename, defaults to timestamp-based name
        """
        if not filename:
            timestamp = datetime.now().strftime("%Y%m%d-%H%M%S")
            filename = f"convergence_{self.label}_{timestamp}.csv"
        self.to_frame().to_csv(filename, index=False, float_format="%.17g")
        return filename
