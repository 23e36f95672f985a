"""Seeded verifier randomness and protocol transcripts.

:class:`Coins` is the verifier's only source of randomness.  It counts
every bit it hands out and remembers each draw, so a run can be written
to a :class:`Transcript` and later re-driven by :class:`ReplayCoins`.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field

from .errors import ProtocolError, UsageError

SENDERS = ("prover", "verifier")
KINDS = ("poly", "prime", "coin", "decision", "params", "values")


class Coins:
    """Bit source backed by ``random.Random(seed)`` with exact accounting."""

    def __init__(self, seed: int = 0):
        self.seed = seed
        self._rng = random.Random(seed)
        self.bits_used = 0
        self.draws: list[tuple[int, int]] = []

    def _next(self, k: int) -> int:
        return self._rng.getrandbits(k) if k else 0

    def getrandbits(self, k: int) -> int:
        v = self._next(k)
        self.bits_used += k
        self.draws.append((k, v))
        return v

    def randbelow(self, n: int) -> int:
        """Uniform integer in [0, n) by rejection on (n-1).bit_length()-bit draws."""
        if n < 1:
            raise UsageError("randbelow needs n >= 1")
        k = (n - 1).bit_length()
        while True:
            v = self.getrandbits(k)
            if v < n:
                return v

    def randrange(self, lo: int, hi: int) -> int:
        return lo + self.randbelow(hi - lo)


class ReplayCoins(Coins):
    """Hands back a recorded sequence of draws instead of fresh randomness."""

    def __init__(self, draws):
        super().__init__(seed=None)
        self._queue = list(draws)
        self._pos = 0

    def _next(self, k: int) -> int:
        if self._pos >= len(self._queue):
            raise ProtocolError("replay ran out of recorded coins")
        rk, v = self._queue[self._pos]
        self._pos += 1
        if rk != k:
            raise ProtocolError(f"replay expected a {rk}-bit draw, protocol asked for {k}")
        return v

    @classmethod
    def from_transcript(cls, t: "Transcript") -> "ReplayCoins":
        return cls([decode_coin(m.payload) for m in t.rounds if m.kind == "coin"])


def encode_coin(k: int, v: int) -> bytes:
    return k.to_bytes(4, "little") + v.to_bytes((k + 7) // 8, "little")


def decode_coin(payload: bytes) -> tuple[int, int]:
    k = int.from_bytes(payload[:4], "little")
    return k, int.from_bytes(payload[4:], "little")


@dataclass
class Message:
    sender: str
    kind: str
    payload: bytes

    def to_json(self) -> dict:
        return {"sender": self.sender, "kind": self.kind, "payload": self.payload.hex()}


@dataclass
class Transcript:
    protocol: str
    params: dict = field(default_factory=dict)
    seed: int | None = None
    rounds: list[Message] = field(default_factory=list)
    decision: bool | None = None

    def send(self, sender: str, kind: str, payload: bytes) -> None:
        if sender not in SENDERS or kind not in KINDS:
            raise UsageError(f"bad transcript message {sender}/{kind}")
        self.rounds.append(Message(sender, kind, bytes(payload)))

    def record_coins(self, coins: Coins, start: int = 0) -> int:
        """Append coin messages for ``coins.draws[start:]``; returns the new offset."""
        for k, v in coins.draws[start:]:
            self.send("verifier", "coin", encode_coin(k, v))
        return len(coins.draws)

    def messages(self, kind: str) -> list[bytes]:
        return [m.payload for m in self.rounds if m.kind == kind]

    def to_json(self) -> str:
        doc = {
            "protocol": self.protocol,
            "params": self.params,
            "seed": self.seed,
            "rounds": [m.to_json() for m in self.rounds],
            "decision": self.decision,
        }
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "Transcript":
        try:
            doc = json.loads(text)
            rounds = [Message(r["sender"], r["kind"], bytes.fromhex(r["payload"])) for r in doc["rounds"]]
            return cls(doc["protocol"], doc.get("params", {}), doc.get("seed"), rounds, doc.get("decision"))
        except (KeyError, TypeError, ValueError) as exc:
            raise UsageError(f"malformed transcript: {exc}") from exc
