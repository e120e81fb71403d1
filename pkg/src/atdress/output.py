"""CSV/JSON emitters and run manifests. Files are written atomically."""
from __future__ import annotations

import datetime
import hashlib
import io
import json
import os
import tempfile

import numpy as np

from . import __version__


def fmt(x) -> str:
    return format(float(x), ".17g")


def atomic_write(path, text: str):
    path = os.fspath(path)
    folder = os.path.dirname(os.path.abspath(path))
    os.makedirs(folder, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=folder, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def digest(config: dict) -> str:
    canonical = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()


def manifest(command: str, config: dict) -> dict:
    return {
        "artifact": "atdress",
        "version": __version__,
        "command": command,
        "config": config,
        "config_digest": digest(config),
        "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
    }


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def csv_text(kind: str, meta: dict, columns, rows) -> str:
    """``# kind`` line, ``# key: json`` metadata lines, header, then data rows."""
    buf = io.StringIO()
    buf.write(f"# {kind}\n")
    for key in sorted(meta):
        buf.write(f"# {key}: {json.dumps(meta[key], sort_keys=True)}\n")
    buf.write(",".join(columns) + "\n")
    for row in rows:
        buf.write(",".join(fmt(v) for v in row) + "\n")
    return buf.getvalue()


def spectrum_csv(detunings, chis: dict, meta: dict) -> str:
    """One ``chi_re,chi_im`` pair per model; a single model uses the plain column names."""
    if len(chis) == 1:
        columns = ["delta_bar_gamma", "chi_re", "chi_im"]
    else:
        columns = ["delta_bar_gamma"]
        for name in chis:
            columns += [f"chi_re_{name}", f"chi_im_{name}"]
    parts = [np.asarray(detunings, dtype=float)]
    for chi in chis.values():
        parts += [np.real(chi), np.imag(chi)]
    return csv_text("chi-spectrum", meta, columns, np.column_stack(parts))


def read_csv(path):
    """Return ``(kind, meta, columns, data)`` for a file written by :func:`csv_text`."""
    kind, meta, columns, rows = None, {}, None, []
    with open(path) as fh:
        for line in fh:
            line = line.rstrip("\n")
            if line.startswith("#"):
                body = line[1:].strip()
                if kind is None:
                    kind = body
                else:
                    key, value = body.split(":", 1)
                    meta[key.strip()] = json.loads(value)
            elif columns is None:
                columns = line.split(",")
            elif line:
                rows.append([float(v) for v in line.split(",")])
    return kind, meta, columns, np.array(rows)
