"""Seed-spreader synthetic data and integer-domain normalisation.

The spreader walks through the cube [0, DOMAIN]^d. At every step it drops
``points_per_step`` points uniformly in a ball of radius ``step_radius``
around its location, then shifts the location by half that radius in a
random direction. With probability ``restart_probability`` it instead
jumps to a uniform location, which starts a new cluster; in ``varden``
mode every jump also draws a fresh radius from
[step_radius, radius_spread * step_radius]. Uniform noise points are
appended last.

Randomness comes from numpy's Philox counter-based bit generator, so a
config always yields the same bytes on any platform.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import Dataset, UsageError, as_dataset

DOMAIN = 100_000.0


@dataclass(frozen=True)
class GenConfig:
    n: int
    d: int = 3
    mode: str = "simden"
    restart_probability: float = 0.1
    points_per_step: int = 100
    step_radius: float = 1000.0
    radius_spread: float = 10.0
    noise_fraction: float = 0.0
    seed: int = 0

    def validate(self) -> None:
        if self.n < 1:
            raise UsageError("n must be at least 1")
        if self.d < 2:
            raise UsageError("d must be at least 2")
        if self.mode not in ("simden", "varden"):
            raise UsageError(f"mode must be simden or varden, got {self.mode!r}")
        if not 0 < self.restart_probability < 1:
            raise UsageError("restart probability must lie in (0, 1)")
        if not 0 <= self.noise_fraction < 1:
            raise UsageError("noise fraction must lie in [0, 1)")
        if self.points_per_step < 1 or not self.step_radius > 0 or self.radius_spread < 1:
            raise UsageError("points_per_step >= 1, step_radius > 0 and radius_spread >= 1 required")


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(seed))


def uniform_ball(rng: np.random.Generator, m: int, d: int, radius: float) -> np.ndarray:
    direction = rng.standard_normal((m, d))
    direction /= np.linalg.norm(direction, axis=1, keepdims=True)
    r = radius * rng.random(m) ** (1.0 / d)
    return direction * r[:, None]


def seed_spreader(config: GenConfig) -> Dataset:
    config.validate()
    rng = make_rng(config.seed)
    d = config.d
    n_noise = math.floor(config.noise_fraction * config.n)
    n_walk = config.n - n_noise

    def new_radius():
        if config.mode == "varden":
            return float(rng.uniform(config.step_radius, config.radius_spread * config.step_radius))
        return config.step_radius

    loc = rng.uniform(0, DOMAIN, d)
    radius = new_radius()
    chunks = []
    left = n_walk
    while left > 0:
        m = min(config.points_per_step, left)
        chunks.append(loc + uniform_ball(rng, m, d, radius))
        left -= m
        if rng.random() < config.restart_probability:
            loc = rng.uniform(0, DOMAIN, d)
            radius = new_radius()
        else:
            step = rng.standard_normal(d)
            loc = np.clip(loc + step * (0.5 * radius / np.linalg.norm(step)), 0, DOMAIN)
    chunks.append(rng.uniform(0, DOMAIN, (n_noise, d)))
    pts = np.clip(np.concatenate(chunks), 0, DOMAIN)
    return Dataset(pts)


def normalize_to_domain(dataset, top: float = DOMAIN) -> Dataset:
    """Map every column affinely onto [0, top] and round to integers.

    Constant columns become all zero.
    """
    pts = as_dataset(dataset).points
    if not len(pts):
        return Dataset(pts)
    lo = pts.min(axis=0)
    span = pts.max(axis=0) - lo
    scale = np.divide(top, span, out=np.zeros_like(span), where=span > 0)
    return Dataset(np.rint((pts - lo) * scale))
