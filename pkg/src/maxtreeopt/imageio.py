"""Image container and file formats.

Images are flat float vectors tied to a :class:`~maxtreeopt.grid.Grid`.
Two exchange formats are supported:

* PGM (portable graymap, P2 ascii / P5 binary, maxval <= 255) for import
  and export of 8-bit data; values are rescaled to [0, 1] on read and
  min-max quantized on write.
* CSV matrices (one row per image row, no header, '.' decimal separator)
  written with 17 significant digits so float64 round-trips are lossless.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import Connectivity, Grid, make_grid


class PgmParseError(ValueError):
    """Malformed PGM input; carries the byte offset of the problem."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


@dataclass(frozen=True)
class Image:
    """Flat vector of pixel values on a grid."""

    values: np.ndarray
    grid: Grid

    def __post_init__(self):
        values = np.ascontiguousarray(self.values, dtype=np.float64)
        if values.ndim != 1 or values.shape[0] != self.grid.n:
            raise ValueError(
                f"expected {self.grid.n} values for a "
                f"{self.grid.width}x{self.grid.height} grid, got shape {values.shape}"
            )
        if not np.all(np.isfinite(values)):
            raise ValueError("image values must be finite")
        object.__setattr__(self, "values", values)

    @property
    def n(self) -> int:
        return self.grid.n

    def as_matrix(self) -> np.ndarray:
        return self.values.reshape(self.grid.height, self.grid.width)

    @classmethod
    def from_matrix(
        cls, matrix, connectivity: Connectivity = Connectivity.CONN8
    ) -> "Image":
        m = np.asarray(matrix, dtype=np.float64)
        if m.ndim == 1:
            m = m[None, :]
        if m.ndim != 2:
            raise ValueError(f"expected a 1-d or 2-d array, got ndim={m.ndim}")
        grid = make_grid(m.shape[1], m.shape[0], connectivity)
        return cls(m.reshape(-1), grid)


class _PgmScanner:
    """Tokenizer for PGM headers: whitespace separated, '#' comments."""

    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def skip_separators(self):
        data = self.data
        while self.pos < len(data):
            c = data[self.pos : self.pos + 1]
            if c.isspace():
                self.pos += 1
            elif c == b"#":
                while self.pos < len(data) and data[self.pos : self.pos + 1] != b"\n":
                    self.pos += 1
            else:
                return

    def next_token(self, what: str) -> bytes:
        self.skip_separators()
        if self.pos >= len(self.data):
            raise PgmParseError(f"unexpected end of file reading {what}", self.pos)
        start = self.pos
        while self.pos < len(self.data) and not self.data[
            self.pos : self.pos + 1
        ].isspace():
            self.pos += 1
        return self.data[start : self.pos]

    def next_int(self, what: str, lo: int, hi: int) -> int:
        start_guess = self.pos
        token = self.next_token(what)
        try:
            value = int(token)
        except ValueError:
            raise PgmParseError(
                f"expected integer for {what}, got {token!r}", start_guess
            ) from None
        if not lo <= value <= hi:
            raise PgmParseError(
                f"{what} {value} outside supported range [{lo}, {hi}]", start_guess
            )
        return value


def read_pgm(path, connectivity: Connectivity = Connectivity.CONN8) -> Image:
    """Read a P2/P5 graymap, rescaling values to [0, 1] by the file's maxval."""
    with open(path, "rb") as fh:
        data = fh.read()
    sc = _PgmScanner(data)
    magic = sc.next_token("magic number")
    if magic not in (b"P2", b"P5"):
        raise PgmParseError(f"unsupported magic number {magic!r}", 0)
    width = sc.next_int("width", 1, 1 << 20)
    height = sc.next_int("height", 1, 1 << 20)
    maxval = sc.next_int("maxval", 1, 255)
    n = width * height
    if magic == b"P5":
        sc.pos += 1  # single whitespace byte after maxval
        raw = data[sc.pos : sc.pos + n]
        if len(raw) < n:
            raise PgmParseError(
                f"truncated pixel data: expected {n} bytes, got {len(raw)}",
                len(data),
            )
        px = np.frombuffer(raw, dtype=np.uint8).astype(np.float64)
    else:
        px = np.empty(n, dtype=np.float64)
        for i in range(n):
            px[i] = sc.next_int("pixel value", 0, maxval)
    if np.any(px > maxval):
        raise PgmParseError(f"pixel value exceeds maxval {maxval}", sc.pos)
    grid = make_grid(width, height, connectivity)
    return Image(px / maxval, grid)


def write_pgm(image: Image, path) -> None:
    """Write as binary P5, min-max quantized to 0..255 (constant -> zeros)."""
    v = image.values
    lo, hi = float(v.min()), float(v.max())
    if hi > lo:
        q = np.rint((v - lo) / (hi - lo) * 255.0).astype(np.uint8)
    else:
        q = np.zeros(image.n, dtype=np.uint8)
    header = f"P5\n{image.grid.width} {image.grid.height}\n255\n".encode("ascii")
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(q.tobytes())


def read_csv_matrix(path, connectivity: Connectivity = Connectivity.CONN8) -> Image:
    """Read a CSV matrix written by :func:`write_csv_matrix`."""
    rows = []
    try:
        with open(path, "r", encoding="ascii") as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    rows.append([float(tok) for tok in line.split(",")])
                except ValueError as exc:
                    raise ValueError(f"{path}: line {lineno}: {exc}") from None
    except OSError as exc:
        raise OSError(f"cannot read CSV matrix {path}: {exc}") from exc
    if not rows:
        raise ValueError(f"{path}: empty CSV matrix")
    width = len(rows[0])
    for lineno, row in enumerate(rows, start=1):
        if len(row) != width:
            raise ValueError(
                f"{path}: line {lineno}: expected {width} columns, got {len(row)}"
            )
    return Image.from_matrix(np.array(rows, dtype=np.float64), connectivity)


def write_csv_matrix(image: Image, path) -> None:
    """Write full-precision CSV (17 significant digits, lossless for float64)."""
    m = image.as_matrix()
    try:
        with open(path, "w", encoding="ascii") as fh:
            for row in m:
                fh.write(",".join(f"{x:.17g}" for x in row))
                fh.write("\n")
    except OSError as exc:
        raise OSError(f"cannot write CSV matrix {path}: {exc}") from exc
