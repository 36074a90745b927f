"""Diffie-Hellman key agreement, hash commitments, and short auth strings.

Two neighbors derive a shared key from exchanged public keys, with a
commit/open round binding the initiator's key material and a k-bit XOR
authentication string compared out-of-band to expose tampering.

All randomness is drawn from caller-supplied ``random.Random`` streams so
that simulations replay exactly; this is a protocol model, not a hardened
implementation.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass

DEFAULT_K = 10

# 57..64-bit primes paired with small generators; one pair is drawn per
# scenario and shared by every node.
DEFAULT_PRIMES = (
    (2305843009213693951, 5),
    (4611686018427387847, 5),
    (9223372036854775783, 5),
    (18446744073709551557, 5),
    (1152921504606846883, 3),
    (576460752303423619, 2),
    (288230376151711717, 2),
    (144115188075855859, 2),
)

_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


class CommitmentMismatch(Exception):
    """An opening does not reproduce the previously received commitment."""


def mod_pow(base: int, exponent: int, modulus: int) -> int:
    """Square-and-multiply base**exponent mod modulus.

    Never materializes the full power; the working values stay below
    modulus**2 throughout.
    """
    if modulus < 2:
        raise ValueError(f"modulus must be >= 2, got {modulus}")
    if exponent < 0:
        raise ValueError(f"exponent must be >= 0, got {exponent}")
    result = 1
    base %= modulus
    while exponent:
        if exponent & 1:
            result = (result * base) % modulus
        base = (base * base) % modulus
        exponent >>= 1
    return result


def is_prime(n: int) -> bool:
    """Miller-Rabin with fixed witnesses; deterministic for 64-bit inputs."""
    if n < 2:
        return False
    for p in _MR_WITNESSES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = mod_pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = (x * x) % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True, slots=True)
class DhParams:
    modulus_m: int
    base_b: int

    def __post_init__(self) -> None:
        if not is_prime(self.modulus_m):
            raise ValueError(f"modulus {self.modulus_m} is not prime")
        if not 1 < self.base_b < self.modulus_m:
            raise ValueError("base must lie strictly between 1 and the modulus")


@dataclass(frozen=True, slots=True)
class PrivateKey:
    r: int


@dataclass(frozen=True, slots=True)
class PublicKey:
    g: int


@dataclass(frozen=True, slots=True)
class SharedKey:
    key: int


@dataclass(frozen=True, slots=True)
class BitString:
    """Fixed-length bit sequence, most significant bit first."""

    bits: tuple[int, ...]

    def __post_init__(self) -> None:
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError("bits must be 0 or 1")

    @classmethod
    def from_text(cls, text: str) -> "BitString":
        return cls(tuple(int(ch) for ch in text))

    @classmethod
    def random(cls, k: int, rng: random.Random) -> "BitString":
        return cls(tuple(rng.getrandbits(1) for _ in range(k)))

    def __str__(self) -> str:
        return "".join(str(b) for b in self.bits)

    def __len__(self) -> int:
        return len(self.bits)

    def to_bytes(self) -> bytes:
        """Pack into ceil(k/8) bytes, first bit into the top of byte 0."""
        n = len(self.bits)
        out = bytearray((n + 7) // 8)
        for i, b in enumerate(self.bits):
            if b:
                out[i // 8] |= 0x80 >> (i % 8)
        return bytes(out)

    @classmethod
    def from_bytes(cls, data: bytes, k: int) -> "BitString":
        if len(data) != (k + 7) // 8:
            raise ValueError("packed length does not match bit count")
        return cls(tuple((data[i // 8] >> (7 - i % 8)) & 1 for i in range(k)))


# The exchanged k-bit value and the XOR of two of them share one layout.
RandomString = BitString
AuthString = BitString


@dataclass(frozen=True, slots=True)
class Concatenation:
    """A node's public key joined with its k-bit random string."""

    public_key: PublicKey
    random_string: RandomString

    def encode(self) -> bytes:
        g_bytes = self.public_key.g.to_bytes((self.public_key.g.bit_length() + 7) // 8 or 1, "big")
        return len(g_bytes).to_bytes(2, "big") + g_bytes + self.random_string.to_bytes()

    @classmethod
    def decode(cls, data: bytes, k: int) -> "Concatenation":
        if len(data) < 2:
            raise ValueError("truncated concatenation")
        g_len = int.from_bytes(data[:2], "big")
        bit_bytes = (k + 7) // 8
        if len(data) != 2 + g_len + bit_bytes:
            raise ValueError("concatenation length mismatch")
        g = int.from_bytes(data[2 : 2 + g_len], "big")
        return cls(PublicKey(g), BitString.from_bytes(data[2 + g_len :], k))


@dataclass(frozen=True, slots=True)
class Commitment:
    digest: bytes


@dataclass(frozen=True, slots=True)
class OpenParam:
    committed_message: Concatenation
    nonce: bytes


def gen_public(params: DhParams, priv: PrivateKey) -> PublicKey:
    """Public key base**r mod m."""
    if not 1 <= priv.r < params.modulus_m:
        raise ValueError("private key out of range for the modulus")
    return PublicKey(mod_pow(params.base_b, priv.r, params.modulus_m))


def commit(msg: Concatenation, nonce: bytes) -> Commitment:
    """Hash the length-prefixed encoded message together with a fresh nonce.

    The nonce is what keeps the commitment hiding; the same (msg, nonce)
    pair always recreates the same digest, which is what the open phase
    checks.
    """
    if not nonce:
        raise ValueError("nonce must be non-empty")
    enc = msg.encode()
    h = hashlib.sha256()
    h.update(len(enc).to_bytes(2, "big"))
    h.update(enc)
    h.update(nonce)
    return Commitment(h.digest())


def open_verify(c: Commitment, w: OpenParam) -> Concatenation:
    """Reveal the committed message, or raise if the opening was tampered."""
    if commit(w.committed_message, w.nonce) != c:
        raise CommitmentMismatch("opening does not match the commitment")
    return w.committed_message


def auth_string(a: RandomString, b: RandomString) -> AuthString:
    """Bitwise XOR of the two exchanged random strings."""
    if len(a.bits) != len(b.bits):
        raise ValueError("auth strings require equal-length inputs")
    return BitString(tuple(x ^ y for x, y in zip(a.bits, b.bits)))


def shared_key(params: DhParams, peer_public: PublicKey, own_private: PrivateKey) -> SharedKey:
    """Shared secret (peer public)**(own private) mod m; equal at both ends."""
    if not 1 <= own_private.r < params.modulus_m:
        raise ValueError("private key out of range for the modulus")
    return SharedKey(mod_pow(peer_public.g, own_private.r, params.modulus_m))
