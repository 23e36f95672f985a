import pytest
from hypothesis import given
from hypothesis import strategies as st

from maproof.errors import ProtocolError, UsageError
from maproof.transcript import Coins, ReplayCoins, Transcript, decode_coin, encode_coin


def test_coins_reproducible_and_counted():
    a, b = Coins(5), Coins(5)
    assert [a.getrandbits(13) for _ in range(5)] == [b.getrandbits(13) for _ in range(5)]
    assert a.bits_used == 65 and len(a.draws) == 5


@given(n=st.integers(1, 10**9), seed=st.integers(0, 100))
def test_randbelow_in_range(n, seed):
    assert 0 <= Coins(seed).randbelow(n) < n


def test_randbelow_rejects_empty_range():
    with pytest.raises(UsageError):
        Coins(0).randbelow(0)


def test_replay_coins():
    c = Coins(3)
    vals = [c.getrandbits(k) for k in (4, 9, 1)]
    r = ReplayCoins(c.draws)
    assert [r.getrandbits(k) for k in (4, 9, 1)] == vals
    with pytest.raises(ProtocolError):
        r.getrandbits(4)
    with pytest.raises(ProtocolError):
        ReplayCoins(c.draws).getrandbits(5)


@given(k=st.integers(0, 200), data=st.data())
def test_coin_codec(k, data):
    v = data.draw(st.integers(0, 2**k - 1))
    assert decode_coin(encode_coin(k, v)) == (k, v)


def test_transcript_json_round_trip():
    t = Transcript("demo", {"p": 17}, 4)
    c = Coins(4)
    c.getrandbits(8)
    t.send("prover", "poly", b"\x01\x02")
    t.record_coins(c)
    t.decision = True
    back = Transcript.from_json(t.to_json())
    assert back == t
    assert ReplayCoins.from_transcript(back).getrandbits(8) == c.draws[0][1]


def test_transcript_rejects_bad_messages():
    t = Transcript("demo")
    with pytest.raises(UsageError):
        t.send("eve", "poly", b"")
    with pytest.raises(UsageError):
        Transcript.from_json("{not json")
