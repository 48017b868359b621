"""Bit-exact reading and writing of sample archives.

Two layers:

* single-array files: the ``\\x93NUMPY`` container (version 1.0 written,
  1.0/2.0 read) restricted to the two element types the datasets use,
  unsigned 8-bit (``|u1``) and little-endian signed 64-bit (``<i8``);
* sample archives: an uncompressed zip holding one single-array member per
  logical field (``image.npy`` with the 16 panels, ``target.npy`` with the
  answer index) plus a ``meta.json`` written by this package and any
  number of opaque auxiliary members carried through losslessly.

Writers are canonical (fixed member order, fixed timestamps, 64-byte
aligned preambles) so identical logical content yields identical bytes;
readers additionally accept the padding variations other writers produce.
"""

from __future__ import annotations

import ast
import json
import re
import struct
import zipfile
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .domain import (
    Panel,
    Provenance,
    PuzzleConfiguration,
    RpmSample,
    Split,
    require_valid,
)
from .errors import (
    BadMagicError,
    FortranOrderError,
    MalformedHeaderError,
    MissingMemberError,
    TargetRangeError,
    TruncatedPayloadError,
    UnsupportedDtypeError,
    UnsupportedVersionError,
    WrongShapeError,
)

MAGIC = b"\x93NUMPY"
_PREAMBLE_ALIGN = 64
_ITEM_SIZES = {"|u1": 1, "<i8": 8}
_DTYPES = {"|u1": np.dtype(np.uint8), "<i8": np.dtype("<i8")}

IMAGE_MEMBER = "image.npy"
TARGET_MEMBER = "target.npy"
META_MEMBER = "meta.json"

# Fixed zip metadata so archives are byte-reproducible.
_ZIP_DATE = (1980, 1, 1, 0, 0, 0)

_FILE_RE = re.compile(r"^RAVEN_(?P<id>.+)_(?P<split>train|val|test)\.npz$")


@dataclass(frozen=True)
class ArrayHeader:
    """Parsed preamble of a single-array file."""

    dtype_descriptor: str
    fortran_order: bool
    shape: tuple[int, ...]

    def __post_init__(self):
        if self.dtype_descriptor not in _ITEM_SIZES:
            raise UnsupportedDtypeError(
                f"unsupported dtype token {self.dtype_descriptor!r}; "
                f"supported: {sorted(_ITEM_SIZES)}"
            )
        object.__setattr__(self, "shape", tuple(int(d) for d in self.shape))
        if any(d < 0 for d in self.shape):
            raise MalformedHeaderError(f"negative dimension in shape {self.shape}")
        if self.element_count() >= 2**64:
            raise MalformedHeaderError(f"shape product overflows 64 bits: {self.shape}")

    def element_count(self) -> int:
        n = 1
        for d in self.shape:
            n *= d
        return n

    def itemsize(self) -> int:
        return _ITEM_SIZES[self.dtype_descriptor]

    def payload_size(self) -> int:
        return self.element_count() * self.itemsize()


def write_array(header: ArrayHeader, payload: bytes) -> bytes:
    """Serialize one array to the canonical version-1.0 byte layout.

    The preamble is the magic, version 1.0, a 2-byte little-endian header
    length, and the ASCII dictionary literal
    ``{'descr': ..., 'fortran_order': ..., 'shape': ..., }`` space-padded
    so the whole preamble is a multiple of 64 bytes and newline-terminated.
    """
    if header.fortran_order:
        raise FortranOrderError("canonical writer emits C order only")
    if len(payload) != header.payload_size():
        raise TruncatedPayloadError(
            f"payload has {len(payload)} bytes, header declares {header.payload_size()}"
        )
    text = (
        "{'descr': '%s', 'fortran_order': False, 'shape': %s, }"
        % (header.dtype_descriptor, repr(tuple(header.shape)))
    )
    raw = text.encode("latin1")
    # +1 for the trailing newline, +10 for magic/version/length fields.
    pad = (-(len(raw) + 1 + len(MAGIC) + 4)) % _PREAMBLE_ALIGN
    declared = len(raw) + pad + 1
    if declared > 0xFFFF:
        raise MalformedHeaderError("header too long for a version-1.0 preamble")
    return b"".join(
        [MAGIC, b"\x01\x00", struct.pack("<H", declared), raw, b" " * pad, b"\n", payload]
    )


def read_array(data: bytes) -> tuple[ArrayHeader, bytes]:
    """Parse a single-array file; exact inverse of :func:`write_array`.

    Also accepts version-2.0 preambles and non-aligned padding from other
    writers. Each failure mode raises a distinct error code.
    """
    if len(data) < len(MAGIC) or data[: len(MAGIC)] != MAGIC:
        raise BadMagicError("not a single-array file (bad magic bytes)")
    if len(data) < len(MAGIC) + 2:
        raise MalformedHeaderError("file ends inside the version field")
    version = (data[6], data[7])
    if version == (1, 0):
        len_fmt, len_size = "<H", 2
    elif version == (2, 0):
        len_fmt, len_size = "<I", 4
    else:
        raise UnsupportedVersionError(f"unsupported format version {version}")
    offset = len(MAGIC) + 2
    if len(data) < offset + len_size:
        raise MalformedHeaderError("file ends inside the header-length field")
    (header_len,) = struct.unpack_from(len_fmt, data, offset)
    offset += len_size
    if len(data) < offset + header_len:
        raise MalformedHeaderError("file ends inside the header dictionary")
    raw = data[offset : offset + header_len]
    offset += header_len

    try:
        literal = ast.literal_eval(raw.decode("latin1").strip())
    except (ValueError, SyntaxError) as exc:
        raise MalformedHeaderError(f"header is not a dict literal: {exc}") from exc
    if not isinstance(literal, dict) or set(literal) != {
        "descr",
        "fortran_order",
        "shape",
    }:
        raise MalformedHeaderError(f"unexpected header keys: {sorted(literal)}")
    descr = literal["descr"]
    if not isinstance(descr, str) or descr not in _ITEM_SIZES:
        raise UnsupportedDtypeError(f"unsupported dtype token {descr!r}")
    fortran = literal["fortran_order"]
    if not isinstance(fortran, bool):
        raise MalformedHeaderError(f"fortran_order must be a bool, got {fortran!r}")
    if fortran:
        raise FortranOrderError("fortran-order payloads are not supported")
    shape = literal["shape"]
    if not isinstance(shape, tuple) or not all(
        isinstance(d, int) and d >= 0 for d in shape
    ):
        raise MalformedHeaderError(f"shape must be a tuple of non-negative ints: {shape!r}")

    header = ArrayHeader(descr, False, shape)
    payload = data[offset:]
    expected = header.payload_size()
    if len(payload) < expected:
        raise TruncatedPayloadError(
            f"header declares {expected} payload bytes, only {len(payload)} present"
        )
    if len(payload) > expected:
        raise MalformedHeaderError(
            f"{len(payload) - expected} trailing bytes after the declared payload"
        )
    return header, payload


def encode_array(arr: np.ndarray) -> bytes:
    """Serialize a uint8 or int64 ndarray to canonical single-array bytes."""
    a = np.asarray(arr)  # tobytes() below already yields C order
    if a.dtype == np.uint8:
        token = "|u1"
    elif a.dtype == np.dtype("<i8"):
        token = "<i8"
    else:
        raise UnsupportedDtypeError(f"unsupported array dtype {a.dtype}")
    header = ArrayHeader(token, False, tuple(a.shape))
    return write_array(header, a.tobytes())


def decode_array(data: bytes) -> np.ndarray:
    """Parse single-array bytes into an ndarray (copy, C order)."""
    header, payload = read_array(data)
    return (
        np.frombuffer(payload, dtype=_DTYPES[header.dtype_descriptor])
        .reshape(header.shape)
        .copy()
    )


def _decode_meta(blob: bytes) -> dict:
    try:
        meta = json.loads(blob.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise MalformedHeaderError(f"meta member is not valid JSON: {exc}") from exc
    if not isinstance(meta, dict):
        raise MalformedHeaderError("meta member must hold a JSON object")
    return meta


def read_sample_archive(
    path: str | Path, config: PuzzleConfiguration | None = None
) -> tuple[RpmSample, dict[str, bytes]]:
    """Load a sample archive.

    Image slices 0..7 become context panels, 8..15 candidates. Members
    other than image/target/meta are returned untouched (raw bytes keyed
    by member name) so a re-write is lossless. ``config`` overrides the
    archive's own metadata; when neither is available the parent
    directory name is tried.
    """
    path = Path(path)
    try:
        with zipfile.ZipFile(path, "r") as zf:
            blobs = {name: zf.read(name) for name in zf.namelist()}
    except zipfile.BadZipFile as exc:
        raise BadMagicError(f"{path} is not a zip container: {exc}") from exc

    for member in (IMAGE_MEMBER, TARGET_MEMBER):
        if member not in blobs:
            raise MissingMemberError(f"{path} lacks required member {member!r}")

    image = decode_array(blobs.pop(IMAGE_MEMBER))
    if image.ndim != 3 or image.shape[0] != 16 or image.dtype != np.uint8:
        raise WrongShapeError(
            f"image member must be uint8 with shape (16, H, W), got "
            f"{image.dtype} {image.shape}"
        )
    if image.shape[1] < 1 or image.shape[2] < 1:
        raise WrongShapeError(f"degenerate panel dimensions {image.shape[1:]}")

    target_arr = decode_array(blobs.pop(TARGET_MEMBER))
    if target_arr.size != 1:
        raise WrongShapeError(f"target member must hold one value, got shape {target_arr.shape}")
    target = int(target_arr.reshape(-1)[0])
    if not 0 <= target < 8:
        raise TargetRangeError(f"target {target} outside [0, 8)")

    provenance = Provenance.ORIGINAL
    degenerate: tuple[int, ...] = ()
    meta_config: PuzzleConfiguration | None = None
    if META_MEMBER in blobs:
        meta = _decode_meta(blobs.pop(META_MEMBER))
        if "config" in meta:
            meta_config = PuzzleConfiguration(meta["config"])
        if "provenance" in meta:
            provenance = Provenance(meta["provenance"])
        degenerate = tuple(int(i) for i in meta.get("degenerate_negatives", ()))

    resolved = config or meta_config
    if resolved is None:
        try:
            resolved = PuzzleConfiguration(path.parent.name)
        except ValueError:
            raise ValueError(
                f"{path}: configuration not recorded in the archive and not "
                f"inferable from the directory name; pass config= explicitly"
            ) from None

    panels = [Panel.from_array(image[i]) for i in range(16)]
    sample = RpmSample(
        context=tuple(panels[:8]),
        candidates=tuple(panels[8:]),
        target=target,
        config=resolved,
        provenance=provenance,
        degenerate_negatives=degenerate,
    )
    return sample, blobs


def write_sample_archive(
    sample: RpmSample,
    aux: dict[str, bytes] | None,
    path: str | Path,
    *,
    compress: bool = False,
) -> None:
    """Write a sample archive with deterministic bytes.

    Member order is image, target, meta, then auxiliary blobs sorted by
    name; timestamps and permissions are fixed. Content is stored
    uncompressed unless ``compress`` is set.
    """
    require_valid(sample)
    aux = dict(aux or {})
    reserved = {IMAGE_MEMBER, TARGET_MEMBER, META_MEMBER}
    clash = reserved & set(aux)
    if clash:
        raise ValueError(f"auxiliary members clash with reserved names: {sorted(clash)}")

    image = np.stack([p.to_array() for p in sample.context + sample.candidates])
    meta = {
        "config": sample.config.value,
        "provenance": sample.provenance.value,
        "degenerate_negatives": list(sample.degenerate_negatives),
    }
    members: list[tuple[str, bytes]] = [
        (IMAGE_MEMBER, encode_array(image)),
        (TARGET_MEMBER, encode_array(np.array(sample.target, dtype="<i8"))),
        (META_MEMBER, json.dumps(meta, sort_keys=True).encode("utf-8")),
    ]
    members.extend((name, aux[name]) for name in sorted(aux))

    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    method = zipfile.ZIP_DEFLATED if compress else zipfile.ZIP_STORED
    with zipfile.ZipFile(path, "w", compression=method) as zf:
        for name, blob in members:
            info = zipfile.ZipInfo(name, date_time=_ZIP_DATE)
            info.compress_type = method
            info.create_system = 3
            info.external_attr = 0o644 << 16
            zf.writestr(info, blob)


@dataclass(frozen=True)
class DatasetEntry:
    """One discovered archive with fields parsed from its path."""

    path: Path
    config: PuzzleConfiguration
    split: Split
    sample_id: str


@dataclass(frozen=True)
class ScanResult:
    entries: tuple[DatasetEntry, ...]
    skipped: int


def sample_filename(sample_id: str, split: Split) -> str:
    return f"RAVEN_{sample_id}_{split.value}.npz"


def scan_dataset(root: str | Path, splits: set[Split] | None = None) -> ScanResult:
    """Discover sample archives under ``root``.

    Expects one directory per configuration holding
    ``RAVEN_<id>_<split>.npz`` files. Entries come back in lexicographic
    order of their relative paths; files that do not fit the layout are
    skipped and counted.
    """
    root = Path(root)
    if not root.is_dir():
        raise NotADirectoryError(f"dataset root {root} is not a readable directory")

    entries: list[DatasetEntry] = []
    skipped = 0
    for item in sorted(root.iterdir()):
        if item.is_file():
            skipped += 1
            continue
        try:
            config = PuzzleConfiguration(item.name)
        except ValueError:
            skipped += sum(1 for f in item.rglob("*") if f.is_file())
            continue
        for f in sorted(item.iterdir()):
            if not f.is_file():
                skipped += sum(1 for g in f.rglob("*") if g.is_file())
                continue
            m = _FILE_RE.match(f.name)
            if m is None:
                skipped += 1
                continue
            split = Split(m.group("split"))
            if splits is not None and split not in splits:
                continue
            entries.append(DatasetEntry(f, config, split, m.group("id")))
    return ScanResult(tuple(entries), skipped)
