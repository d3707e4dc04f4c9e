"""Double encryption over a Keedwell CIPQ U and its isotope V.

Pipeline for a byte message::

    bytes --encode--> base-n symbols m
          --layer 1--> c  = y + m          (product in U)
          --layer 2--> c' = c delta        (carried into V)

Decryption pulls back with ``delta^-1`` and multiplies by the crossed inverse
``y^rho`` in U, using ``(y + m) + y^rho = m``.  Layer 2 commutes with the
isotopism ``(beta^-1 delta, gamma, delta)``:
``c delta = (y beta^-1 delta) * (m gamma)`` in V.

This is a demonstration of the algebra, with no security claims.

File formats (both carry ``"v": 1``)::

    envelope := {"v": 1, "n": <int>, "byte_length": <int>, "symbols": [<int>, ...]}
    bundle   := {"v": 1, "params": {"n", "r", "s", "u"}, "group": {"factors": [...]},
                 "y": <int>, "key": {"n", "alpha", "beta", "psi"}}
"""
from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Optional

import gmpy2
import numpy as np

from .algebra import CayleyTable, inverse_maps
from .isotopy import DerivedMaps, IsotopyKey, check_key, derive_maps
from .keedwell import AbelianGroupSpec, KeedwellParams, find_params, keedwell_cipq, power_map, build_abelian_group
from .morphism import Permutation, invert

FORMAT_VERSION = 1

_LOWER = "0123456789abcdefghijklmnopqrstuvwxyz"
_DC_CUTOFF = 48


class CryptoError(ValueError):
    pass


# ---------------------------------------------------------------------------
# base-n coding
# ---------------------------------------------------------------------------


@lru_cache(maxsize=256)
def symbol_count(byte_length: int, n: int) -> int:
    """Smallest k with ``n**k >= 256**byte_length``."""
    if n < 2:
        raise ValueError("alphabet size must be >= 2")
    if byte_length == 0:
        return 0
    bound = gmpy2.mpz(1) << (8 * byte_length)
    k = max(1, math.ceil(8 * byte_length / math.log2(n)))
    base = gmpy2.mpz(n)
    while base ** k < bound:
        k += 1
    while k > 1 and base ** (k - 1) >= bound:
        k -= 1
    return k


class _Powers(dict):
    def __init__(self, n):
        super().__init__()
        self.base = gmpy2.mpz(n)

    def __missing__(self, k):
        v = self[k] = self.base ** k
        return v


def _split_digits(x, k, pw, out, lo):
    """Write the k base-n digits of ``x`` (most significant first) to out[lo:lo+k]."""
    if k <= _DC_CUTOFF:
        base = pw.base
        for i in range(lo + k - 1, lo - 1, -1):
            x, d = gmpy2.f_divmod(x, base)
            out[i] = int(d)
        return
    half = k // 2
    hi, rest = gmpy2.f_divmod(x, pw[half])
    _split_digits(hi, k - half, pw, out, lo)
    _split_digits(rest, half, pw, out, lo + k - half)


def _join_digits(digits, pw):
    k = len(digits)
    if k <= _DC_CUTOFF:
        acc = gmpy2.mpz(0)
        base = pw.base
        for d in digits.tolist():
            acc = acc * base + d
        return acc
    half = k // 2
    return _join_digits(digits[: k - half], pw) * pw[half] + _join_digits(digits[k - half:], pw)


def int_to_digits(value: int, n: int, k: int) -> np.ndarray:
    """Exactly ``k`` base-n digits of ``value``, most significant first."""
    value = gmpy2.mpz(value)
    if value < 0 or (k > 0 and value >= gmpy2.mpz(n) ** k) or (k == 0 and value):
        raise ValueError(f"value does not fit in {k} base-{n} digits")
    if k == 0:
        return np.zeros(0, dtype=np.int64)
    if n <= 36:
        text = gmpy2.digits(value, n).encode("ascii")
        raw = np.frombuffer(text, dtype=np.uint8)
        out = np.zeros(k, dtype=np.int64)
        out[k - raw.size:] = _ASCII_TO_DIGIT[raw]
        return out
    out = np.empty(k, dtype=np.int64)
    _split_digits(value, k, _Powers(n), out, 0)
    return out


def digits_to_int(digits, n: int):
    digits = np.asarray(digits, dtype=np.int64)
    if digits.size == 0:
        return gmpy2.mpz(0)
    if n <= 36:
        return gmpy2.mpz(_DIGIT_TO_ASCII[digits].tobytes().decode("ascii"), n)
    return _join_digits(digits, _Powers(n))


_ASCII_TO_DIGIT = np.zeros(256, dtype=np.int64)
for _i, _c in enumerate(_LOWER):
    _ASCII_TO_DIGIT[ord(_c)] = _i
_DIGIT_TO_ASCII = np.frombuffer(_LOWER.encode("ascii"), dtype=np.uint8)


def encode_bytes(data: bytes, n: int) -> np.ndarray:
    """Payload as a big-endian integer, written in base n with a fixed width."""
    k = symbol_count(len(data), n)
    return int_to_digits(int.from_bytes(data, "big"), n, k)


def decode_symbols(symbols, n: int, byte_length: int) -> bytes:
    symbols = np.asarray(symbols, dtype=np.int64)
    if symbols.size != symbol_count(byte_length, n):
        raise CryptoError(f"{symbols.size} symbols cannot encode {byte_length} bytes in base {n}")
    _check_range(symbols, n)
    value = digits_to_int(symbols, n)
    if value >> (8 * byte_length):
        raise CryptoError("symbol stream decodes past the declared byte length")
    return int(value).to_bytes(byte_length, "big")


def _check_range(symbols: np.ndarray, n: int):
    bad = np.flatnonzero((symbols < 0) | (symbols >= n))
    if bad.size:
        i = int(bad[0])
        raise CryptoError(f"symbol {int(symbols[i])} at position {i} is outside 0..{n - 1}")


# ---------------------------------------------------------------------------
# the two layers
# ---------------------------------------------------------------------------


def encrypt_layer1(u: CayleyTable, y: int, m) -> np.ndarray:
    m = np.asarray(m, dtype=np.int64)
    _check_range(m, u.n)
    if not 0 <= y < u.n:
        raise CryptoError(f"key element {y} outside 0..{u.n - 1}")
    return u.table[y, m]


def decrypt_layer1(u: CayleyTable, y: int, c) -> np.ndarray:
    c = np.asarray(c, dtype=np.int64)
    _check_range(c, u.n)
    maps = inverse_maps(u)
    if maps is None:
        raise CryptoError("U has no crossed inverse; layer 1 cannot be undone")
    return u.table[c, maps.j_rho.image[y]]


def encrypt_layer2(c, maps: DerivedMaps) -> np.ndarray:
    c = np.asarray(c, dtype=np.int64)
    _check_range(c, maps.delta.n)
    return maps.delta.array[c]


def decrypt_layer2(c, maps: DerivedMaps) -> np.ndarray:
    c = np.asarray(c, dtype=np.int64)
    _check_range(c, maps.delta.n)
    return invert(maps.delta).array[c]


# ---------------------------------------------------------------------------
# bundles and envelopes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CipherEnvelope:
    n: int
    byte_length: int
    symbols: tuple

    def __post_init__(self):
        arr = np.asarray(self.symbols, dtype=np.int64)
        _check_range(arr, self.n)
        if arr.size != symbol_count(self.byte_length, self.n):
            raise CryptoError(f"{arr.size} symbols inconsistent with byte_length {self.byte_length} for n = {self.n}")

    def to_json(self) -> str:
        return json.dumps(
            {"v": FORMAT_VERSION, "n": self.n, "byte_length": self.byte_length, "symbols": list(self.symbols)},
            separators=(",", ":"),
        ) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "CipherEnvelope":
        doc = _load_versioned(text, "envelope")
        try:
            n, length, symbols = doc["n"], doc["byte_length"], doc["symbols"]
        except KeyError as exc:
            raise CryptoError(f"envelope is missing {exc}") from None
        if not (_is_int(n) and _is_int(length) and isinstance(symbols, list) and all(_is_int(s) for s in symbols)):
            raise CryptoError("envelope fields have the wrong types")
        return cls(n, length, tuple(symbols))


def _is_int(v) -> bool:
    return isinstance(v, int) and not isinstance(v, bool)


def _load_versioned(text: str, what: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CryptoError(f"{what} is not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise CryptoError(f"{what} must be a JSON object")
    if doc.get("v") != FORMAT_VERSION:
        raise CryptoError(f'unsupported {what} version {doc.get("v")!r}')
    return doc


@dataclass(frozen=True)
class KeyBundle:
    params: KeedwellParams
    group: AbelianGroupSpec
    y: int
    key: IsotopyKey

    def __post_init__(self):
        n = self.params.n
        if self.group.order != n:
            raise CryptoError(f"group order {self.group.order} does not match n = {n}")
        if not 0 <= self.y < n:
            raise CryptoError(f"y = {self.y} outside 0..{n - 1}")
        if self.key.n != n:
            raise CryptoError(f"isotopy key has degree {self.key.n}, expected {n}")

    @property
    def n(self) -> int:
        return self.params.n

    @cached_property
    def cipq(self) -> CayleyTable:
        u = keedwell_cipq(self.params, self.group)
        check_key(u, self.key)
        return u

    @cached_property
    def maps(self) -> DerivedMaps:
        return derive_maps(self.key)

    def to_json(self) -> str:
        doc = {
            "v": FORMAT_VERSION,
            "params": {k: v for k, v in self.params.to_dict().items() if k != "nonunipotent"},
            "group": {"factors": list(self.group.factors)},
            "y": self.y,
            "key": self.key.to_dict(),
        }
        return json.dumps(doc, indent=1) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "KeyBundle":
        doc = _load_versioned(text, "bundle")
        try:
            return cls(
                KeedwellParams.from_dict(doc["params"]),
                AbelianGroupSpec(doc["group"]["factors"]),
                int(doc["y"]),
                IsotopyKey.from_dict(doc["key"]),
            )
        except (KeyError, TypeError) as exc:
            raise CryptoError(f"malformed bundle: {exc}") from None


def generate_bundle(n: int, r: Optional[int] = None, s: Optional[int] = None, factors=None, seed=None, nonunipotent: bool = True) -> KeyBundle:
    """Fresh random bundle.

    alpha and beta are power maps ``x -> x^k`` with k a unit mod the group
    exponent (automorphisms of both G and the Keedwell table); psi is a
    uniformly random permutation.
    """
    rng = random.Random(seed)
    if r is None or s is None:
        options = find_params(n, require_nonunipotent=nonunipotent)
        if not options:
            raise CryptoError(f"no Keedwell parameters for n = {n}")
        params = options[0]
    else:
        params = KeedwellParams.make(n, r, s)
    spec = AbelianGroupSpec(factors or (n,))
    g = build_abelian_group(spec)
    units = [k for k in range(1, spec.exponent) if math.gcd(k, spec.exponent) == 1]
    alpha = Permutation(power_map(g, rng.choice(units)))
    beta = Permutation(power_map(g, rng.choice(units)))
    psi = list(range(n))
    rng.shuffle(psi)
    return KeyBundle(params, spec, rng.randrange(n), IsotopyKey(alpha, beta, Permutation(psi)))


def encrypt(bundle: KeyBundle, data: bytes) -> CipherEnvelope:
    m = encode_bytes(data, bundle.n)
    c = encrypt_layer1(bundle.cipq, bundle.y, m)
    out = encrypt_layer2(c, bundle.maps)
    return CipherEnvelope(bundle.n, len(data), tuple(out.tolist()))


def decrypt(bundle: KeyBundle, envelope: CipherEnvelope) -> bytes:
    if envelope.n != bundle.n:
        raise CryptoError(f"envelope alphabet {envelope.n} does not match bundle n = {bundle.n}")
    c = decrypt_layer2(np.asarray(envelope.symbols, dtype=np.int64), bundle.maps)
    m = decrypt_layer1(bundle.cipq, bundle.y, c)
    return decode_symbols(m, bundle.n, envelope.byte_length)
