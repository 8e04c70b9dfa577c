"""Spectrum CSV files and JSON run reports."""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
from decimal import Decimal
from pathlib import Path

import numpy as np

from . import __version__
from .errors import DomainError
from .radiometry import SpectralGrid, SpectrumSamples

SPECTRUM_HEADER = ("freq_ghz", "intensity", "sigma")


class SpectrumFileError(DomainError):
    """Malformed spectrum file; the message names the offending line."""

    def __init__(self, path, line: int, reason: str):
        self.path = str(path)
        self.line = line
        super().__init__(f"{path}: line {line}: {reason}")


def _fmt(x: float) -> str:
    return "%.17g" % x


def _hz_to_ghz_text(nu: float) -> str:
    # shift the decimal point of the 17-digit Hz value, so loading is exact
    return format(Decimal(_fmt(nu)).scaleb(-9).normalize(), "f")


def _ghz_text_to_hz(text: str) -> float:
    return float(Decimal(text).scaleb(9))


def _parse_float(path, line_no: int, column: str, text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise SpectrumFileError(path, line_no, f"{column} is not a number: {text!r}") from None
    if not math.isfinite(value):
        raise SpectrumFileError(path, line_no, f"{column} is not finite: {text!r}")
    return value


def load_spectrum(path) -> SpectrumSamples:
    """Read a ``freq_ghz,intensity,sigma`` CSV; frequencies are returned in Hz.

    The sigma column may be empty on every row (no uncertainties) or filled on
    every row. Raises ``FileNotFoundError``/``OSError`` for I/O problems and
    :class:`SpectrumFileError` for content problems.
    """
    path = Path(path)
    with path.open(newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or tuple(c.strip() for c in rows[0]) != SPECTRUM_HEADER:
        got = ",".join(rows[0]) if rows else "<empty file>"
        raise SpectrumFileError(path, 1, f"header must be {','.join(SPECTRUM_HEADER)!r}, got {got!r}")

    freqs, values, sigmas = [], [], []
    for line_no, row in enumerate(rows[1:], start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != 3:
            raise SpectrumFileError(path, line_no, f"expected 3 columns, got {len(row)}")
        f_text, v_text, s_text = (c.strip() for c in row)
        f_ghz = _parse_float(path, line_no, "freq_ghz", f_text)
        if f_ghz <= 0:
            raise SpectrumFileError(path, line_no, f"freq_ghz must be positive, got {f_text}")
        try:
            nu = _ghz_text_to_hz(f_text)
        except ArithmeticError:
            raise SpectrumFileError(path, line_no, f"freq_ghz is not a number: {f_text!r}") from None
        if freqs and nu <= freqs[-1]:
            raise SpectrumFileError(path, line_no, "frequencies must be strictly increasing")
        freqs.append(nu)
        values.append(_parse_float(path, line_no, "intensity", v_text))
        if s_text:
            sigma = _parse_float(path, line_no, "sigma", s_text)
            if sigma < 0:
                raise SpectrumFileError(path, line_no, f"sigma must be >= 0, got {s_text}")
            sigmas.append((line_no, sigma))
        else:
            sigmas.append((line_no, None))

    if len(freqs) < 2:
        raise SpectrumFileError(path, len(rows), "need at least 2 data rows")
    present = [s is not None for _, s in sigmas]
    if any(present) and not all(present):
        line_no = next(ln for ln, s in sigmas if (s is not None) != present[0])
        raise SpectrumFileError(path, line_no, "sigma must be given on every row or on none")
    sig = np.array([s for _, s in sigmas]) if all(present) else None
    return SpectrumSamples(SpectralGrid(np.array(freqs)), np.array(values), sig)


def format_spectrum(samples: SpectrumSamples) -> str:
    if len(samples) == 0:
        raise DomainError("cannot write an empty spectrum")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SPECTRUM_HEADER)
    sig = samples.sigmas
    for i, (nu, v) in enumerate(zip(samples.frequencies, samples.values)):
        writer.writerow([_hz_to_ghz_text(float(nu)), _fmt(float(v)), "" if sig is None else _fmt(float(sig[i]))])
    return buf.getvalue()


def save_spectrum(samples: SpectrumSamples, path) -> None:
    """Write ``samples`` as a spectrum CSV that :func:`load_spectrum` reads back bit-exactly."""
    Path(path).write_text(format_spectrum(samples))


# -- reports ---------------------------------------------------------------


def _encode(obj, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return _fmt(x) if math.isfinite(x) else "null"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_encode(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        seq = obj.tolist() if isinstance(obj, np.ndarray) else obj
        if not seq:
            return "[]"
        if all(isinstance(v, (int, float, np.integer, np.floating)) and not isinstance(v, bool) for v in seq):
            return "[" + ", ".join(_encode(v, indent, level + 1) for v in seq) + "]"
        return "[\n" + ",\n".join(pad + _encode(v, indent, level + 1) for v in seq) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps_report(report: dict, indent: int = 2) -> str:
    """JSON text with every float written at 17 significant digits. NaN/inf become null."""
    return _encode(report, indent, 0) + "\n"


def sha256_bytes(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def parameters_digest(parameters: dict) -> str:
    return sha256_bytes(dumps_report(parameters).encode())


def make_report(command: str, parameters: dict, results: dict, seeds: dict | None = None,
                input_digest: str | None = None, timestamp: str | None = None) -> dict:
    return {
        "command": command,
        "tool_version": __version__,
        "input_digest": input_digest if input_digest is not None else parameters_digest(parameters),
        "parameters": parameters,
        "results": results,
        "seeds": seeds or {},
        "timestamp": timestamp,
    }
