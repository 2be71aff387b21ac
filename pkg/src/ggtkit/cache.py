"""Ball caching keyed by (model content hash, radius).

Cache files are plain JSON; loads re-verify the model hash and spot-check
the stored parent tree, recomputing (with a warning) on any mismatch.
"""

from __future__ import annotations

import hashlib
import json
import os
import random
import sys
from typing import Optional

from .cayley import Ball, ball
from .config import DEFAULT_BALL_CAP
from .groups import GroupModel

PARENT_SAMPLE = 100


def model_hash(model: GroupModel) -> str:
    canonical = json.dumps(model.to_dict(), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()


def _cache_path(cache_dir: str, model: GroupModel, radius: int) -> str:
    return os.path.join(cache_dir, f"ball_{model_hash(model)[:20]}_r{radius}.json")


def cache_ball(b: Ball, cache_dir: str) -> str:
    os.makedirs(cache_dir, exist_ok=True)
    path = _cache_path(cache_dir, b.model, b.radius)
    payload = {
        "model": b.model.to_dict(),
        "radius": b.radius,
        "elements": [b.model.element_to_json(e) for e in b.elements],
        "parents": b.parents,
        "parent_gen": b.parent_gen,
        "lengths": b.lengths,
    }
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        json.dump(payload, fh, separators=(",", ":"))
    os.replace(tmp, path)
    return path


def _warn(message: str) -> None:
    print(f"ggtkit: cache warning: {message}", file=sys.stderr)


def load_ball(model: GroupModel, radius: int, cache_dir: str) -> Optional[Ball]:
    """Load a cached ball, or None when missing or failing verification."""
    path = _cache_path(cache_dir, model, radius)
    if not os.path.exists(path):
        return None
    try:
        with open(path) as fh:
            payload = json.load(fh)
        if payload["model"] != model.to_dict() or payload["radius"] != radius:
            _warn("model or radius mismatch; recomputing")
            return None
        elements = [model.element_from_json(e) for e in payload["elements"]]
        b = Ball(
            model,
            radius,
            elements,
            {e: i for i, e in enumerate(elements)},
            list(payload["parents"]),
            list(payload["parent_gen"]),
            list(payload["lengths"]),
        )
        if len(b.index) != len(elements):
            _warn("duplicate elements in cached ball; recomputing")
            return None
        rng = random.Random(0)
        size = len(elements)
        sample = range(size) if size <= PARENT_SAMPLE else rng.sample(range(size), PARENT_SAMPLE)
        for i in sample:
            if not b.verify_parent(i):
                _warn("parent-tree verification failed; recomputing")
                return None
        return b
    except (OSError, ValueError, KeyError, IndexError, TypeError) as exc:
        _warn(f"unreadable cache file ({exc}); recomputing")
        return None


def get_or_build_ball(
    model: GroupModel,
    radius: int,
    cache_dir: Optional[str],
    *,
    cap: int = DEFAULT_BALL_CAP,
):
    """Returns (ball, source) with source one of 'hit', 'miss', 'off'."""
    if not cache_dir:
        return ball(model, radius, cap=cap), "off"
    cached = load_ball(model, radius, cache_dir)
    if cached is not None:
        return cached, "hit"
    built = ball(model, radius, cap=cap)
    cache_ball(built, cache_dir)
    return built, "miss"
