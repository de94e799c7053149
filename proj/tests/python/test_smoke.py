import os

import numpy as np
import pytest

import tersoffmd as tmd

DATA = os.path.join(os.path.dirname(__file__), "..", "..", "data")


def jittered_system(seed=3, jitter=0.1):
    sys = tmd.make_diamond_lattice(2, 2, 2)
    rng = np.random.default_rng(seed)
    pos = sys.positions + rng.uniform(-jitter, jitter, size=(sys.natoms, 3))
    lengths = np.array([sys.box.lx, sys.box.ly, sys.box.lz])
    sys.positions = np.mod(pos, lengths)
    return sys


def test_param_table():
    p = tmd.builtin_silicon()
    assert p.species_count == 1
    assert p.species_names == ["Si"]
    assert p.r_cut_max == 3.2
    assert "Si Si Si" in p.serialize()


def test_param_file_roundtrip():
    p = tmd.load_params(os.path.join(DATA, "Si.tersoff"))
    assert p.species_count == 1
    q = tmd.parse_params(p.serialize())
    assert q.serialize() == p.serialize()


def test_param_errors():
    with pytest.raises(tmd.ConfigError):
        tmd.load_params("/nonexistent/file.tersoff")
    with pytest.raises(tmd.ParseError):
        tmd.parse_params("Si Si Si 1 2 3")


def test_lattice_and_velocities():
    sys = tmd.make_diamond_lattice(2, 2, 2, a0=5.431, species_id=0, mass=28.0855)
    assert sys.natoms == 64
    assert sys.positions.shape == (64, 3)
    assert sys.box.lx == pytest.approx(2 * 5.431)
    tmd.init_velocities(sys, 300.0, 7)
    assert tmd.temperature(sys) == pytest.approx(300.0, rel=1e-12)
    assert max(abs(c) for c in tmd.total_momentum(sys)) < 1e-10


def test_forces_and_schemes():
    params = tmd.builtin_silicon()
    sys = jittered_system()
    lst = tmd.build_neighbor_list(sys, params.r_cut_max, skin=0.5)
    assert lst.natoms == 64
    assert lst.pair_count > 0
    assert not tmd.needs_rebuild(lst, sys)

    e_ref, f_ref = tmd.compute_ref(sys, lst, params)
    assert e_ref < 0
    assert f_ref.shape == (64, 3)
    assert np.abs(f_ref.sum(axis=0)).max() < 1e-10

    e, f = tmd.evaluate_forces(sys, lst, params, scheme="v2", width=8)
    assert abs(e - e_ref) <= 1e-12 * abs(e_ref)
    assert np.abs(f - f_ref).max() <= 1e-10

    e_s, _ = tmd.evaluate_forces(sys, lst, params, precision="single")
    assert abs(e_s - e_ref) <= 1e-4 * abs(e_ref)

    with pytest.raises(tmd.ConfigError):
        tmd.evaluate_forces(sys, lst, params, scheme="v9")
    with pytest.raises(tmd.ConfigError):
        tmd.evaluate_forces(sys, lst, params, width=3)


def test_run_nve():
    params = tmd.builtin_silicon()
    sys = tmd.make_diamond_lattice(2, 2, 2)
    tmd.init_velocities(sys, 300.0, 11)
    rep = tmd.run_nve(sys, params, steps=50, dt=0.001, thermo_every=10)
    samples = rep["samples"]
    assert [s["step"] for s in samples] == [0, 10, 20, 30, 40, 50]
    e0 = samples[0]["etot_eV"]
    assert max(abs(s["etot_eV"] - e0) for s in samples) <= 1e-4 * abs(e0)
    assert rep["width"] in (1, 4, 8, 16)
    assert rep["precision"] == "opt-d"
    assert rep["csv"].startswith("step,time_ps,temp_K,pe_eV,ke_eV,etot_eV")
    assert rep["system"].natoms == 64
    # the input system is untouched; the run worked on a copy
    assert tmd.temperature(sys) == pytest.approx(300.0, rel=1e-12)
