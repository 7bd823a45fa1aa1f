"""Tests for the closed-loop augmentation and the classical-only baseline."""

from __future__ import annotations

import numpy as np
import pytest
from numpy.testing import assert_allclose

import cke
from cke.doubled import is_delta_structured
from cke.errors import ChannelMismatch, ControllerNotRealizable
from cke.interconnect import classical_only, close_loop
from cke.qsystem import (
    CoherentController,
    InputChannel,
    OutputChannel,
    QuantumLinearSystem,
    build_beam_splitter_controller,
    build_cavity_plant,
    build_squeezer_controller,
)

ROOT_HALF = np.sqrt(0.5)


def reassembled_blocks(plant, controller):
    """Independent oracle: assemble the augmented matrices from raw blocks."""
    f = plant.drift
    g1 = plant.input("A").drive
    g2 = plant.input("U").drive
    h = plant.output("Y").readout
    k = plant.feedthrough_block("Y", "A")
    fc = controller.drift
    gc1 = controller.input("Atilde").drive
    gc2 = controller.input("Y").drive
    hct = controller.output("Ytilde").readout
    kct1 = controller.feedthrough_block("Ytilde", "Atilde")
    kct2 = controller.feedthrough_block("Ytilde", "Y")
    hc = controller.output("U").readout
    kc1 = controller.feedthrough_block("U", "Atilde")
    kc2 = controller.feedthrough_block("U", "Y")
    drift = np.block([[f + g2 @ kc2 @ h, g2 @ hc], [gc2 @ h, fc]])
    drive = np.block([[g1 + g2 @ kc2 @ k, g2 @ kc1], [gc2 @ k, gc1]])
    readout = np.block([[kct2 @ h, hct]])
    feed = np.block([[kct2 @ k, kct1]])
    return drift, drive, readout, feed


class TestCloseLoop:
    def test_squeezer_loop_blocks(self, cavity, squeezer):
        aug = close_loop(cavity, squeezer)
        # feedback through the second mirror doubles the effective decay
        assert_allclose(aug.drift[:2, :2], -np.eye(2), atol=1e-12)
        # controller vacuum drives only the controller state
        assert_allclose(aug.drive[2:, 2:], -np.sqrt(5.0) * np.eye(2), atol=1e-4)
        assert aug.state_half_widths == (1, 1)
        assert aug.noise_channels == (("A", 1), ("Atilde", 1))
        assert aug.noise_half_widths == (1, 1)
        assert aug.measured_half_width == 1

    def test_matches_block_reassembly(self, cavity, squeezer):
        aug = close_loop(cavity, squeezer)
        drift, drive, readout, feed = reassembled_blocks(cavity, squeezer)
        assert_allclose(aug.drift, drift, atol=1e-12)
        assert_allclose(aug.drive, drive, atol=1e-12)
        assert_allclose(aug.readout, readout, atol=1e-12)
        assert_allclose(aug.feedthrough, feed, atol=1e-12)
        assert_allclose(aug.cost_row, [[ROOT_HALF, -ROOT_HALF, 0, 0]], atol=1e-12)

    def test_random_loops_match_reassembly(self, oscillator_factory):
        # conforming random realizable plant and controller, one mode each
        rng = np.random.default_rng(99)
        for _ in range(10):
            ham_p, coup_p = oscillator_factory(rng, 1, 2)
            base = cke.realize(cke.signature_matrix(1), ham_p, coup_p)
            # split the stacked two-mode channel into width-1 channels; in the
            # global doubled ordering channel k occupies slots (k, k + m)
            drive = base.gathered_drive()
            readout = base.gathered_readout()
            g1, g2 = drive[:, [0, 2]], drive[:, [1, 3]]
            h = readout[[0, 2], :]
            plant = QuantumLinearSystem(
                n=1,
                drift=base.drift,
                inputs=(InputChannel("A", 1, g1), InputChannel("U", 1, g2)),
                outputs=(
                    OutputChannel("Y", 1, h, {"A": np.eye(2, dtype=complex)}),
                ),
                cost_row=np.array([[1.0, 0.5]], dtype=complex),
            )
            chi = complex(rng.standard_normal()) * 0.3
            controller = build_squeezer_controller(
                float(rng.uniform(0.5, 3.0)), float(rng.uniform(0.5, 3.0)), chi
            )
            aug = close_loop(plant, controller)
            drift, drive, readout, feed = reassembled_blocks(plant, controller)
            assert_allclose(aug.drift, drift, atol=1e-10)
            assert_allclose(aug.drive, drive, atol=1e-10)
            assert_allclose(aug.readout, readout, atol=1e-10)
            assert_allclose(aug.feedthrough, feed, atol=1e-10)

    def test_beam_splitter_loop(self, cavity):
        bs = build_beam_splitter_controller(np.pi / 4)
        aug = close_loop(cavity, bs)
        # no feedback: plant drift unchanged, control input becomes vacuum
        assert_allclose(aug.drift, cavity.drift, atol=1e-12)
        assert aug.noise_channels == (("A", 1), ("U", 1), ("Atilde", 1))
        kct2 = bs.feedthrough_block("Ytilde", "Y")
        assert_allclose(aug.readout, kct2 @ cavity.output("Y").readout, atol=1e-12)
        assert_allclose(aug.feedthrough[:, :2], kct2, atol=1e-12)
        assert_allclose(aug.feedthrough[:, 2:4], np.zeros((4, 2)), atol=1e-12)
        assert_allclose(
            aug.feedthrough[:, 4:], bs.feedthrough_block("Ytilde", "Atilde"), atol=1e-12
        )

    def test_structure_preserved_globally(self, cavity, squeezer):
        aug = close_loop(cavity, squeezer)
        for which in ("drift", "drive", "readout", "feedthrough"):
            assert is_delta_structured(aug.global_form(which), 1e-9)

    def test_dimension_contract(self, cavity, squeezer):
        aug = close_loop(cavity, squeezer)
        m, m_tilde = aug.noise_half_widths
        assert aug.drive.shape[1] == 2 * (m + m_tilde)
        assert aug.feedthrough.shape[1] == 2 * (m + m_tilde)

    def test_width_mismatch_rejected(self, cavity):
        wide = CoherentController(
            n=0,
            drift=np.zeros((0, 0), dtype=complex),
            inputs=(
                InputChannel("Atilde", 1, np.zeros((0, 2), dtype=complex)),
                InputChannel("Y", 2, np.zeros((0, 4), dtype=complex)),
            ),
            outputs=(
                OutputChannel(
                    "Ytilde",
                    1,
                    np.zeros((2, 0), dtype=complex),
                    {"Atilde": np.eye(2, dtype=complex)},
                ),
            ),
        )
        with pytest.raises(ChannelMismatch, match="half-width"):
            close_loop(cavity, wide)

    def test_unrealizable_dynamic_controller_rejected(self, cavity):
        # wrong drive sign breaks the coupling condition
        bad = CoherentController(
            n=1,
            drift=cke.delta_embed(-0.5, 0).full,
            inputs=(
                InputChannel("Atilde", 1, cke.delta_embed(+ROOT_HALF, 0).full),
                InputChannel("Y", 1, cke.delta_embed(-ROOT_HALF, 0).full),
            ),
            outputs=(
                OutputChannel(
                    "Ytilde",
                    1,
                    cke.delta_embed(ROOT_HALF, 0).full,
                    {"Atilde": np.eye(2, dtype=complex)},
                ),
                OutputChannel(
                    "U",
                    1,
                    cke.delta_embed(ROOT_HALF, 0).full,
                    {"Y": np.eye(2, dtype=complex)},
                ),
            ),
        )
        with pytest.raises(ControllerNotRealizable, match="CouplingMismatch"):
            close_loop(cavity, bad)

    def test_nonunitary_static_controller_rejected(self, cavity):
        lossy = CoherentController(
            n=0,
            drift=np.zeros((0, 0), dtype=complex),
            inputs=(
                InputChannel("Atilde", 1, np.zeros((0, 2), dtype=complex)),
                InputChannel("Y", 1, np.zeros((0, 2), dtype=complex)),
            ),
            outputs=(
                OutputChannel(
                    "Ytilde",
                    2,
                    np.zeros((4, 0), dtype=complex),
                    {
                        "Atilde": 0.5 * build_beam_splitter_controller(0.3)
                        .feedthrough_block("Ytilde", "Atilde"),
                        "Y": 0.5 * build_beam_splitter_controller(0.3)
                        .feedthrough_block("Ytilde", "Y"),
                    },
                ),
            ),
        )
        with pytest.raises(ControllerNotRealizable, match="commutators"):
            close_loop(cavity, lossy)


class TestClassicalOnly:
    def test_cavity_baseline(self, cavity):
        aug = classical_only(cavity)
        assert aug.state_half_widths == (1, 0)
        assert_allclose(aug.drift, cavity.drift)
        assert_allclose(
            aug.drive, np.hstack([-ROOT_HALF * np.eye(2), -ROOT_HALF * np.eye(2)]),
            atol=1e-12,
        )
        assert_allclose(
            aug.feedthrough, np.hstack([np.eye(2), np.zeros((2, 2))]), atol=1e-12
        )
        assert_allclose(aug.cost_row, cavity.cost_row)
        assert aug.noise_half_widths == (2, 0)

    def test_plant_without_control_input(self):
        plant = QuantumLinearSystem(
            n=1,
            drift=cke.delta_embed(-0.25, 0).full,
            inputs=(InputChannel("A", 1, cke.delta_embed(-ROOT_HALF, 0).full),),
            outputs=(
                OutputChannel(
                    "Y",
                    1,
                    cke.delta_embed(ROOT_HALF, 0).full,
                    {"A": np.eye(2, dtype=complex)},
                ),
            ),
            cost_row=np.array([[1.0, 0.0]], dtype=complex),
        )
        aug = classical_only(plant)
        assert_allclose(aug.drive, plant.input("A").drive)
        assert_allclose(aug.feedthrough, np.eye(2))

    def test_missing_output_rejected(self):
        plant = QuantumLinearSystem(
            n=1, drift=cke.delta_embed(-0.5, 0).full, inputs=(), outputs=()
        )
        with pytest.raises(ChannelMismatch, match="'Y'"):
            classical_only(plant)

    def test_equals_pass_through_loop(self, cavity):
        pass_through = CoherentController(
            n=0,
            drift=np.zeros((0, 0), dtype=complex),
            inputs=(
                InputChannel("Atilde", 0, np.zeros((0, 0), dtype=complex)),
                InputChannel("Y", 1, np.zeros((0, 2), dtype=complex)),
            ),
            outputs=(
                OutputChannel(
                    "Ytilde",
                    1,
                    np.zeros((2, 0), dtype=complex),
                    {"Y": np.eye(2, dtype=complex)},
                ),
            ),
        )
        baseline = classical_only(cavity)
        looped = close_loop(cavity, pass_through)
        assert_allclose(looped.drift, baseline.drift)
        assert_allclose(looped.drive, baseline.drive)
        assert_allclose(looped.readout, baseline.readout)
        assert_allclose(looped.feedthrough, baseline.feedthrough)
        assert_allclose(looped.cost_row, baseline.cost_row)
