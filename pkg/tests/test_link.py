"""Session state machine and out-of-band comparison tests."""

import itertools

import pytest

from larsim.crypto import BitString
from larsim.link import LinkTiming, OobChannel, OutOfRange, WfdPhase, establish, oob_compare


class TestLinkTiming:
    def test_defaults_sum_to_10ms(self):
        assert LinkTiming().session_setup == pytest.approx(0.010)

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            LinkTiming(wps=-0.001)


class TestEstablish:
    def test_zero_delays(self):
        session, delay = establish(1, 2, LinkTiming(0, 0, 0, 0, 0, 0))
        assert session.phase is WfdPhase.ESTABLISHED
        assert delay == 0.0

    def test_delay_is_sum_of_phases(self):
        timing = LinkTiming(0.002, 0.002, 0.003, 0.003)
        _, delay = establish(1, 2, timing)
        assert delay == pytest.approx(0.010)

    def test_out_of_range(self):
        with pytest.raises(OutOfRange):
            establish(1, 2, LinkTiming(), distance=250.0, tx_range=200.0)

    def test_passes_through_all_phases_in_order(self):
        session, _ = establish(3, 9, LinkTiming())
        assert session.history == [
            WfdPhase.IDLE,
            WfdPhase.DISCOVERY,
            WfdPhase.GO_NEGOTIATION,
            WfdPhase.WPS,
            WfdPhase.ADDR_CONFIG,
            WfdPhase.ESTABLISHED,
        ]

    def test_group_owner_is_smaller_id(self):
        session, _ = establish(9, 3, LinkTiming())
        assert session.group_owner == 3

    def test_rejects_self_session(self):
        with pytest.raises(ValueError):
            establish(4, 4, LinkTiming())

    def test_arbitrary_timing_sums(self):
        timing = LinkTiming(0.001, 0.005, 0.002, 0.008)
        _, delay = establish(0, 1, timing)
        assert delay == pytest.approx(0.016)


class TestOobCompare:
    channel = OobChannel(1, 2)
    timing = LinkTiming()

    def test_identical_strings_match(self):
        s = BitString.from_text("1010101010")
        match, delay = oob_compare(self.channel, s, s, self.timing)
        assert match and delay == self.timing.oob_delay

    def test_single_bit_difference(self):
        a = BitString.from_text("1010101010")
        b = BitString.from_text("1010101011")
        match, _ = oob_compare(self.channel, a, b, self.timing)
        assert not match

    def test_exhaustive_k3_sweep(self):
        for bits_a in itertools.product((0, 1), repeat=3):
            for bits_b in itertools.product((0, 1), repeat=3):
                match, _ = oob_compare(
                    self.channel, BitString(bits_a), BitString(bits_b), self.timing
                )
                assert match == (bits_a == bits_b)
