"""Canonical JSON persistence for the three network kinds.

Files carry a kind tag plus dimensions, row-major weights, biases, and the
anneal schedule where applicable; formatting is canonical so save -> load ->
save round-trips byte-identically.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .boltzmann import AnnealSchedule, BoltzmannMachine
from .errors import ParseError
from .hopfield import HopfieldNet
from .perceptron import Perceptron


def _schedule_doc(schedule: AnnealSchedule) -> dict:
    return {
        "t_initial": schedule.t_initial,
        "decay": schedule.decay,
        "steps_per_temp": schedule.steps_per_temp,
        "t_final": schedule.t_final,
        "rng_seed": schedule.rng_seed,
    }


def _schedule_from(doc: dict) -> AnnealSchedule:
    return AnnealSchedule(
        t_initial=float(doc["t_initial"]),
        decay=float(doc["decay"]),
        steps_per_temp=int(doc["steps_per_temp"]),
        t_final=float(doc["t_final"]),
        rng_seed=int(doc["rng_seed"]),
    )


def network_to_json(net) -> str:
    if isinstance(net, HopfieldNet):
        doc = {
            "kind": "hopfield",
            "dimension": net.dimension,
            "stored_count": net.stored_count,
            "weights": [float(v) for v in net.weights.ravel()],
        }
    elif isinstance(net, BoltzmannMachine):
        doc = {
            "kind": "boltzmann",
            "n_in": net.n_in,
            "n_out": net.n_out,
            "n_hidden": net.n_hidden,
            "weights": [float(v) for v in net.weights.ravel()],
            "biases": [float(v) for v in net.biases],
            "schedule": _schedule_doc(net.schedule),
        }
    elif isinstance(net, Perceptron):
        doc = {
            "kind": "perceptron",
            "classes": net.classes,
            "dimension": net.dimension,
            "weights": [float(v) for v in net.weights.ravel()],
        }
    else:
        raise ParseError(f"cannot serialize network of type {type(net).__name__}")
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def network_from_json(text: str):
    doc = json.loads(text)
    kind = doc.get("kind")
    if kind == "hopfield":
        dim = int(doc["dimension"])
        weights = np.array(doc["weights"], dtype=np.float64).reshape(dim, dim)
        weights.setflags(write=False)
        return HopfieldNet(weights=weights, dimension=dim, stored_count=int(doc["stored_count"]))
    if kind == "boltzmann":
        n_in = int(doc["n_in"])
        n_out = int(doc["n_out"])
        n_hidden = int(doc["n_hidden"])
        units = n_in + n_out + n_hidden
        weights = np.array(doc["weights"], dtype=np.float64).reshape(units, units)
        biases = np.array(doc["biases"], dtype=np.float64)
        return BoltzmannMachine(
            n_in=n_in,
            n_out=n_out,
            n_hidden=n_hidden,
            weights=weights,
            biases=biases,
            schedule=_schedule_from(doc["schedule"]),
        )
    if kind == "perceptron":
        classes = int(doc["classes"])
        dim = int(doc["dimension"])
        weights = np.array(doc["weights"], dtype=np.float64).reshape(classes, dim + 1)
        return Perceptron(weights=weights, classes=classes, dimension=dim)
    raise ParseError(f"unknown network kind {kind!r}")


def save_network(net, path) -> None:
    Path(path).write_text(network_to_json(net), encoding="utf-8")


def load_network(path):
    return network_from_json(Path(path).read_text(encoding="utf-8"))
