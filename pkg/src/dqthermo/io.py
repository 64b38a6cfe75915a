"""JSON spec files in, JSON/CSV reports out.

Matrices are lists of rows; each entry is either a real number or a
``[re, im]`` pair.  Every spec document carries a ``kind``:

``trajectory``
    ``initial`` = {``hamiltonian``, optional ``rho``}, optional ``initial_beta``
    (Gibbs initial state when ``rho`` is absent), ``steps`` = list of
    ``{"type": "DUT", "unitary", "hamiltonian"}``, ``{"type": "DUQ", "hamiltonian"}``
    or ``{"type": "DTT", "beta"}``.
``extremal``
    ``initial`` = {``hamiltonian``}, ``initial_beta``, ``final_hamiltonian``, ``final_beta``.
``cycle``
    ``h_1``, ``h_2``, ``beta_1``, ``beta_2``, optional ``dut_a``, ``dut_b``, ``refinement_n``.
``path``
    ``samples`` = list of {``hamiltonian``, ``rho``} or {``hamiltonian``, ``beta``}.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import numpy as np

from . import __version__
from .carnot import CycleSpec
from .configuration import Configuration, ThermalConfiguration, density_matrix, gibbs_state
from .continuous import SampledPath
from .linalg import check_hermitian, check_unitary
from .primitives import DTT, DUQ, DUT, Step

SIG_DIGITS = 12


class SpecError(ValueError):
    def __init__(self, where: str, message: str):
        super().__init__(f"{where}: {message}" if where else message)
        self.where = where


@dataclass(frozen=True, eq=False)
class TrajectorySpec:
    initial: Configuration
    steps: tuple[Step, ...]
    initial_beta: float | None = None


@dataclass(frozen=True, eq=False)
class ExtremalSpec:
    initial: ThermalConfiguration
    final_hamiltonian: np.ndarray
    final_beta: float


# ---------------------------------------------------------------- parsing


def _entry(x, where: str) -> complex:
    if isinstance(x, bool):
        raise SpecError(where, f"expected a number or [re, im], got {x!r}")
    if isinstance(x, (int, float)):
        return complex(float(x), 0.0)
    if isinstance(x, list) and len(x) == 2 and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in x):
        return complex(float(x[0]), float(x[1]))
    raise SpecError(where, f"expected a number or [re, im], got {x!r}")


def _matrix(obj, where: str, dim: int | None) -> np.ndarray:
    if not isinstance(obj, list) or not obj or not all(isinstance(r, list) for r in obj):
        raise SpecError(where, "expected a matrix given as a list of rows")
    n = len(obj)
    for i, row in enumerate(obj):
        if len(row) != n:
            raise SpecError(f"{where}[{i}]", f"row has {len(row)} entries, expected {n}")
    if dim is not None and n != dim:
        raise SpecError(where, f"matrix is {n}x{n} but dim is {dim}")
    return np.array([[_entry(x, f"{where}[{i}][{j}]") for j, x in enumerate(row)] for i, row in enumerate(obj)])


def _real(obj, where: str) -> float:
    if isinstance(obj, bool) or not isinstance(obj, (int, float)):
        raise SpecError(where, f"expected a real number, got {obj!r}")
    return float(obj)


def _field(doc: dict, key: str, where: str):
    if key not in doc:
        raise SpecError(where, f"missing field '{key}'")
    return doc[key]


def _build(where: str, factory, *args, **kwargs):
    try:
        return factory(*args, **kwargs)
    except SpecError:
        raise
    except (ValueError, TypeError) as exc:
        raise SpecError(where, str(exc)) from exc


def _hermitian(obj, where: str, dim: int | None) -> np.ndarray:
    return _build(where, check_hermitian, _matrix(obj, where, dim))


def _unitary(obj, where: str, dim: int | None) -> np.ndarray:
    return _build(where, check_unitary, _matrix(obj, where, dim))


def _configuration(doc, where: str, dim: int | None, beta: float | None = None) -> Configuration:
    if not isinstance(doc, dict):
        raise SpecError(where, "expected an object with 'hamiltonian' and 'rho' or 'beta'")
    H = _hermitian(_field(doc, "hamiltonian", where), f"{where}.hamiltonian", dim)
    if "beta" in doc:
        beta = _real(doc["beta"], f"{where}.beta")
    if "rho" in doc:
        rho = _build(f"{where}.rho", density_matrix, _matrix(doc["rho"], f"{where}.rho", dim))
        if beta is not None:
            return _build(where, ThermalConfiguration, rho, H, beta=beta)
        return _build(where, Configuration, rho, H)
    if beta is None:
        raise SpecError(where, "needs either 'rho' or a 'beta' for a Gibbs state")
    return _build(where, gibbs_state, H, beta)


def _step(doc, where: str, dim: int | None) -> Step:
    if not isinstance(doc, dict):
        raise SpecError(where, "expected a step object")
    kind = _field(doc, "type", where)
    if kind == "DTT":
        return _build(where, DTT, _real(_field(doc, "beta", where), f"{where}.beta"))
    if kind == "DUQ":
        return _build(where, DUQ, _hermitian(_field(doc, "hamiltonian", where), f"{where}.hamiltonian", dim))
    if kind == "DUT":
        V = _unitary(_field(doc, "unitary", where), f"{where}.unitary", dim)
        H = _hermitian(_field(doc, "hamiltonian", where), f"{where}.hamiltonian", dim)
        return _build(where, DUT, V, H)
    raise SpecError(f"{where}.type", f"unknown step type {kind!r} (expected DUT, DUQ or DTT)")


def _load(source: str | Path) -> tuple[dict, str]:
    if isinstance(source, Path):
        text = source.read_text()
    else:
        text = source
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"line {exc.lineno}, column {exc.colno}", f"invalid JSON: {exc.msg}") from exc
    if not isinstance(doc, dict):
        raise SpecError("", "top-level document must be an object")
    return doc, text


def parse_spec(source: str | Path):
    """Parse spec text (or a ``Path``) into domain objects, enforcing all invariants."""
    doc, _ = _load(source)
    kind = doc.get("kind", "trajectory")
    dim = doc.get("dim")
    if dim is not None and (isinstance(dim, bool) or not isinstance(dim, int) or dim < 1):
        raise SpecError("dim", f"expected a positive integer, got {dim!r}")
    if kind == "trajectory":
        beta = doc.get("initial_beta")
        if beta is not None:
            beta = _real(beta, "initial_beta")
        initial = _configuration(_field(doc, "initial", ""), "initial", dim, beta)
        steps = _field(doc, "steps", "")
        if not isinstance(steps, list):
            raise SpecError("steps", "expected a list")
        return TrajectorySpec(initial, tuple(_step(s, f"steps[{k}]", initial.dim) for k, s in enumerate(steps)), beta)
    if kind == "extremal":
        beta_i = _real(_field(doc, "initial_beta", ""), "initial_beta")
        initial = _configuration(_field(doc, "initial", ""), "initial", dim, beta_i)
        h_f = _hermitian(_field(doc, "final_hamiltonian", ""), "final_hamiltonian", initial.dim)
        beta_f = _real(_field(doc, "final_beta", ""), "final_beta")
        _build("final_beta", gibbs_state, h_f, beta_f)
        return ExtremalSpec(initial, h_f, beta_f)
    if kind == "cycle":
        h_1 = _hermitian(_field(doc, "h_1", ""), "h_1", dim)
        h_2 = _hermitian(_field(doc, "h_2", ""), "h_2", h_1.shape[0])
        kwargs: dict[str, Any] = {}
        for key in ("dut_a", "dut_b"):
            if doc.get(key) is not None:
                kwargs[key] = _unitary(doc[key], key, h_1.shape[0])
        n = doc.get("refinement_n", 0)
        if isinstance(n, bool) or not isinstance(n, int):
            raise SpecError("refinement_n", f"expected an integer, got {n!r}")
        return _build(
            "",
            CycleSpec,
            _real(_field(doc, "beta_1", ""), "beta_1"),
            _real(_field(doc, "beta_2", ""), "beta_2"),
            h_1,
            h_2,
            refinement_n=n,
            **kwargs,
        )
    if kind == "path":
        samples = _field(doc, "samples", "")
        if not isinstance(samples, list):
            raise SpecError("samples", "expected a list")
        configs = [_configuration(s, f"samples[{k}]", dim) for k, s in enumerate(samples)]
        return _build("samples", SampledPath, tuple(configs))
    raise SpecError("kind", f"unknown kind {kind!r} (expected trajectory, extremal, cycle or path)")


def input_digest(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()


# ---------------------------------------------------------- serialization


def matrix_to_json(M) -> list:
    M = np.asarray(M, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in M]


def _config_to_json(c: Configuration) -> dict:
    return {"hamiltonian": matrix_to_json(c.hamiltonian), "rho": matrix_to_json(c.rho)}


def _step_to_json(s: Step) -> dict:
    if isinstance(s, DTT):
        return {"type": "DTT", "beta": s.beta}
    if isinstance(s, DUQ):
        return {"type": "DUQ", "hamiltonian": matrix_to_json(s.hamiltonian)}
    return {"type": "DUT", "unitary": matrix_to_json(s.unitary), "hamiltonian": matrix_to_json(s.hamiltonian)}


def spec_to_json(obj) -> dict:
    """Inverse of ``parse_spec`` at full float precision."""
    if isinstance(obj, TrajectorySpec):
        doc = {"kind": "trajectory", "dim": obj.initial.dim, "initial": _config_to_json(obj.initial)}
        if obj.initial_beta is not None:
            doc["initial_beta"] = obj.initial_beta
        doc["steps"] = [_step_to_json(s) for s in obj.steps]
        return doc
    if isinstance(obj, ExtremalSpec):
        return {
            "kind": "extremal",
            "dim": obj.initial.dim,
            "initial": _config_to_json(obj.initial),
            "initial_beta": obj.initial.beta,
            "final_hamiltonian": matrix_to_json(obj.final_hamiltonian),
            "final_beta": obj.final_beta,
        }
    if isinstance(obj, CycleSpec):
        return {
            "kind": "cycle",
            "dim": obj.dim,
            "beta_1": obj.beta_1,
            "beta_2": obj.beta_2,
            "h_1": matrix_to_json(obj.h_1),
            "h_2": matrix_to_json(obj.h_2),
            "dut_a": matrix_to_json(obj.dut_a),
            "dut_b": matrix_to_json(obj.dut_b),
            "refinement_n": obj.refinement_n,
        }
    if isinstance(obj, SampledPath):
        return {"kind": "path", "dim": obj.samples[0].dim, "samples": [_config_to_json(c) for c in obj.samples]}
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dump_spec(obj) -> str:
    return json.dumps(spec_to_json(obj), indent=2) + "\n"


# ---------------------------------------------------------------- reports


def fmt_number(x):
    """Round to 12 significant digits; non-finite values become strings."""
    if x is None or isinstance(x, (bool, str)):
        return x
    if isinstance(x, (int, np.integer)):
        return int(x)
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    y = float(f"{x:.{SIG_DIGITS}g}")
    return 0.0 if y == 0 else y


def _clean(obj):
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.bool_):
        return bool(obj)
    return fmt_number(obj)


def report_document(command: str, digest: str, result: dict) -> dict:
    return {"tool": "dqthermo", "version": __version__, "command": command, "input_digest": digest, "result": result}


def emit_report(document: dict, fmt: str = "json", table: list[dict] | None = None) -> str:
    """Render a report.  CSV output writes ``table`` (a list of flat rows)."""
    if fmt == "json":
        return json.dumps(_clean(document), indent=2) + "\n"
    if fmt == "csv":
        rows = [_clean(r) for r in (table or [])]
        buf = io.StringIO()
        if rows:
            writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
            writer.writeheader()
            for r in rows:
                writer.writerow({k: "" if v is None else (f"{v:.12g}" if isinstance(v, float) else v) for k, v in r.items()})
        return buf.getvalue()
    raise ValueError(f"unknown report format {fmt!r}")
