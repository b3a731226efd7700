"""Stable JSON file formats for operators and maps.

The emitter is canonical: fixed field order (insertion order of the writer),
floats rendered with 17 significant digits (round-trip exact for doubles),
negative zero normalized to zero, no whitespace variation. save -> load ->
save is therefore byte-identical, which is what makes witness replay exact.

Infinities never appear as raw JSON numbers; fields that can be infinite are
encoded as the strings "+inf" / "-inf" by ``encode_extended``.
"""

from __future__ import annotations

import json
import math

import numpy as np

from .linalg import (
    DEFAULT_TOL,
    DomainError,
    ToleranceConfig,
    as_matrix,
    require_hermitian,
    require_projector,
    require_psd,
)
from . import channels
from .channels import SuperOperator, from_choi, from_kraus, from_matrix

__all__ = [
    "FormatError",
    "SCHEMA_VERSION",
    "canonical_json",
    "save_json",
    "load_json",
    "encode_extended",
    "decode_extended",
    "matrix_to_dict",
    "matrix_from_dict",
    "channel_to_dict",
    "channel_from_dict",
]

SCHEMA_VERSION = "1"

MATRIX_KINDS = ("general", "hermitian", "psd", "density", "projector")


class FormatError(ValueError):
    """A file or payload does not conform to the declared schema."""


def _format_float(x: float) -> str:
    if math.isnan(x) or math.isinf(x):
        raise FormatError("non-finite floats must be encoded with encode_extended")
    if x == 0.0:
        return "0"
    return format(x, ".17g")


def _emit(obj, out: list) -> None:
    if obj is None:
        out.append("null")
    elif obj is True:
        out.append("true")
    elif obj is False:
        out.append("false")
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.append(_format_float(float(obj)))
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, (list, tuple)):
        out.append("[")
        for i, item in enumerate(obj):
            if i:
                out.append(", ")
            _emit(item, out)
        out.append("]")
    elif isinstance(obj, dict):
        out.append("{")
        for i, (key, value) in enumerate(obj.items()):
            if not isinstance(key, str):
                raise FormatError(f"object keys must be strings, got {type(key).__name__}")
            if i:
                out.append(", ")
            out.append(json.dumps(key))
            out.append(": ")
            _emit(value, out)
        out.append("}")
    else:
        raise FormatError(f"cannot serialize value of type {type(obj).__name__}")


def canonical_json(obj) -> str:
    out: list = []
    _emit(obj, out)
    return "".join(out)


def save_json(path, obj) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(canonical_json(obj))
        fh.write("\n")


def load_json(path):
    with open(path, "r", encoding="ascii") as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise FormatError(f"not valid JSON: {exc}") from exc


def encode_extended(x: float):
    """Extended real -> JSON value: finite number, or "+inf" / "-inf"."""
    x = float(x)
    if math.isnan(x):
        raise FormatError("NaN is not a legal extended-real value")
    if x == math.inf:
        return "+inf"
    if x == -math.inf:
        return "-inf"
    return x


def decode_extended(v) -> float:
    if v == "+inf":
        return math.inf
    if v == "-inf":
        return -math.inf
    if isinstance(v, (int, float)) and not isinstance(v, bool):
        x = float(v)
        if math.isnan(x) or math.isinf(x):
            raise FormatError("raw non-finite numbers are not legal; use \"+inf\"/\"-inf\"")
        return x
    raise FormatError(f"not an extended-real encoding: {v!r}")


def _real_rows(A: np.ndarray) -> list:
    return [[float(x) for x in row] for row in A]


def _matrix_payload(M: np.ndarray) -> dict:
    return {"re": _real_rows(M.real), "im": _real_rows(M.imag)}


def _matrix_from_payload(payload: dict, rows: int, cols: int, what: str) -> np.ndarray:
    try:
        re = np.asarray(payload["re"], dtype=np.float64)
        im = np.asarray(payload["im"], dtype=np.float64)
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"{what}: malformed re/im arrays") from exc
    if re.shape != (rows, cols) or im.shape != (rows, cols):
        raise FormatError(
            f"{what}: expected {rows}x{cols} arrays, got {re.shape} and {im.shape}"
        )
    return re + 1j * im


def _validate_kind(M: np.ndarray, kind: str, cfg: ToleranceConfig) -> None:
    try:
        if kind == "general":
            pass
        elif kind == "hermitian":
            require_hermitian(M, cfg)
        elif kind == "psd":
            require_psd(M, cfg)
        elif kind == "density":
            require_psd(M, cfg)
            if abs(float(np.trace(M).real) - 1.0) > 1e-9:
                raise DomainError(f"trace is {float(np.trace(M).real):.12g}, not 1")
        elif kind == "projector":
            require_projector(M, cfg)
        else:
            raise FormatError(f"unknown matrix kind {kind!r}")
    except DomainError as exc:
        raise FormatError(f"matrix does not satisfy declared kind {kind!r}: {exc}") from exc


def matrix_to_dict(M, kind: str = "general", cfg: ToleranceConfig = DEFAULT_TOL) -> dict:
    M = as_matrix(M)
    if M.shape[0] != M.shape[1]:
        raise FormatError(f"matrix files hold square matrices, got shape {M.shape}")
    _validate_kind(M, kind, cfg)
    out = {"schema_version": SCHEMA_VERSION, "kind": kind, "dim": M.shape[0]}
    out.update(_matrix_payload(M))
    return out


def matrix_from_dict(d: dict, cfg: ToleranceConfig = DEFAULT_TOL) -> tuple[np.ndarray, str]:
    """Parse and re-validate a matrix payload; returns the matrix unmodified."""
    if not isinstance(d, dict):
        raise FormatError("matrix payload must be an object")
    if d.get("schema_version") != SCHEMA_VERSION:
        raise FormatError(f"unsupported schema_version {d.get('schema_version')!r}")
    kind = d.get("kind")
    if kind not in MATRIX_KINDS:
        raise FormatError(f"unknown matrix kind {kind!r}")
    dim = d.get("dim")
    if not isinstance(dim, int) or dim < 1:
        raise FormatError(f"dim must be a positive integer, got {dim!r}")
    M = _matrix_from_payload(d, dim, dim, "matrix file")
    _validate_kind(M, kind, cfg)
    return M, kind


def channel_to_dict(phi: SuperOperator, representation: str | None = None) -> dict:
    """Serialize a map, preferring recipe over payload.

    Auto order: family descriptor when present, else Kraus operators, else
    the raw representation matrix. The chosen form determines the evaluation
    path on reload, matching the original map's path bit for bit.
    """
    if representation is None:
        if phi.descriptor is not None:
            representation = "family"
        elif phi.kraus is not None:
            representation = "kraus"
        else:
            representation = "superop_matrix"
    out = {
        "schema_version": SCHEMA_VERSION,
        "dim_in": phi.dim_in,
        "dim_out": phi.dim_out,
        "representation": representation,
    }
    if representation == "family":
        if phi.descriptor is None:
            raise FormatError("map has no family descriptor to serialize")
        out["family"] = phi.descriptor["family"]
        out["params"] = phi.descriptor.get("params") or {}
        out["seed"] = phi.descriptor.get("seed")
    elif representation == "kraus":
        if phi.kraus is None:
            raise FormatError("map has no Kraus form to serialize")
        out["kraus"] = [_matrix_payload(K) for K in phi.kraus]
    elif representation == "superop_matrix":
        out.update(_matrix_payload(phi.matrix))
    elif representation == "choi":
        out.update(_matrix_payload(channels.choi(phi)))
    else:
        raise FormatError(f"unknown channel representation {representation!r}")
    return out


def channel_from_dict(d: dict, cfg: ToleranceConfig = DEFAULT_TOL) -> SuperOperator:
    if not isinstance(d, dict):
        raise FormatError("channel payload must be an object")
    if d.get("schema_version") != SCHEMA_VERSION:
        raise FormatError(f"unsupported schema_version {d.get('schema_version')!r}")
    dim_in, dim_out = d.get("dim_in"), d.get("dim_out")
    for name, value in (("dim_in", dim_in), ("dim_out", dim_out)):
        if not isinstance(value, int) or value < 1:
            raise FormatError(f"{name} must be a positive integer, got {value!r}")
    rep = d.get("representation")
    try:
        if rep == "family":
            phi = channels.construct(d["family"], d.get("params") or {}, d.get("seed"), cfg)
        elif rep == "kraus":
            payloads = d.get("kraus")
            if not isinstance(payloads, list) or not payloads:
                raise FormatError("kraus payload must be a nonempty list")
            kraus = [
                _matrix_from_payload(p, dim_out, dim_in, f"kraus[{i}]")
                for i, p in enumerate(payloads)
            ]
            phi = from_kraus(kraus, dim_in, dim_out, cfg)
        elif rep == "superop_matrix":
            M = _matrix_from_payload(d, dim_out * dim_out, dim_in * dim_in, "superop matrix")
            phi = from_matrix(M, dim_in, dim_out)
        elif rep == "choi":
            C = _matrix_from_payload(d, dim_out * dim_in, dim_out * dim_in, "choi matrix")
            phi = from_choi(C, dim_in, dim_out)
        else:
            raise FormatError(f"unknown channel representation {rep!r}")
    except KeyError as exc:
        raise FormatError(f"channel payload missing field {exc}") from exc
    except DomainError as exc:
        raise FormatError(f"channel payload invalid: {exc}") from exc
    if phi.dim_in != dim_in or phi.dim_out != dim_out:
        raise FormatError(
            f"declared dims ({dim_in}, {dim_out}) do not match "
            f"constructed map ({phi.dim_in}, {phi.dim_out})"
        )
    return phi
