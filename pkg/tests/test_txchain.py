import numpy as np
import pytest

from fmcwisac.constellation import build_constellation
from fmcwisac.params import SystemConfig, derive_params
from fmcwisac.txchain import ComplexSignal, gen_chirp, modulate, rrc_taps, shape_symbols


def _params(n=1024, b_ch=2e9, r=50e6, span=8):
    return derive_params(
        SystemConfig(f_c=77e9, B_ch=b_ch, f_s=200e6, N=n, R=r, rrc_beta=0.3, rrc_span=span)
    )


def test_rrc_structure():
    ps = rrc_taps(0.3, 4, 8)
    assert ps.taps.size == 65
    assert np.allclose(ps.taps, ps.taps[::-1])
    assert np.argmax(ps.taps) == 32


@pytest.mark.parametrize("beta,sps", [(1.0, 2), (1.0, 4), (0.5, 2), (0.25, 4)])
def test_rrc_singularities_finite(beta, sps):
    ps = rrc_taps(beta, sps, 6)
    assert np.all(np.isfinite(ps.taps))
    assert np.max(np.abs(ps.taps)) > 0


def test_rrc_beta_zero_is_sinc_like():
    ps = rrc_taps(0.0, 4, 8)
    center = ps.taps.size // 2
    # zero crossings at nonzero symbol instants
    at_symbols = ps.taps[center::4][1:]
    assert np.max(np.abs(at_symbols)) < 1e-9 * np.abs(ps.taps[center])


@pytest.mark.parametrize("beta,sps,span", [(-0.1, 4, 8), (1.1, 4, 8), (0.3, 0, 8), (0.3, 4, 3)])
def test_rrc_rejects_bad_arguments(beta, sps, span):
    with pytest.raises(ValueError):
        rrc_taps(beta, sps, span)


def test_rrc_nyquist_isi():
    # matched filtering an RRC against itself gives a raised cosine whose
    # residual ISI at symbol instants stays 40 dB under the main tap
    ps = rrc_taps(0.3, 4, 8)
    rc = np.convolve(ps.taps, ps.taps)
    center = rc.size // 2
    offsets = 4 * np.arange(-(center // 4), center // 4 + 1)
    vals = rc[center + offsets]
    isi = vals[offsets != 0]
    assert np.max(np.abs(isi)) < 10 ** (-40 / 20) * rc[center]


def test_shape_all_ones_is_nearly_constant():
    p = _params()
    ps = rrc_taps(p.rrc_beta, p.sps, p.rrc_span)
    x = shape_symbols(np.ones(p.M), ps, p).samples
    ripple = (np.max(np.abs(x)) - np.min(np.abs(x))) / np.mean(np.abs(x))
    assert ripple < 0.01


def test_shape_impulse_is_shifted_taps():
    p = _params()
    ps = rrc_taps(p.rrc_beta, p.sps, p.rrc_span)
    syms = np.zeros(p.M)
    syms[0] = 1.0
    x = shape_symbols(syms, ps, p).samples
    center = ps.taps.size // 2
    expected = np.zeros(p.N, dtype=complex)
    for i, tap in enumerate(ps.taps):
        expected[(i - center) % p.N] += tap
    assert np.allclose(x, expected, atol=1e-12)


def test_shape_random_payload_power():
    p = _params()
    ps = rrc_taps(p.rrc_beta, p.sps, p.rrc_span)
    c = build_constellation("qam", 4)
    rng = np.random.default_rng(12)
    for _ in range(5):
        syms = c.points[rng.integers(0, 4, p.M)]
        power = np.mean(np.abs(shape_symbols(syms, ps, p).samples) ** 2)
        assert 0.9 <= power <= 1.1


def test_shape_is_linear():
    p = _params()
    ps = rrc_taps(p.rrc_beta, p.sps, p.rrc_span)
    rng = np.random.default_rng(13)
    a = rng.standard_normal(p.M) + 1j * rng.standard_normal(p.M)
    b = rng.standard_normal(p.M) + 1j * rng.standard_normal(p.M)
    lhs = shape_symbols(a + b, ps, p).samples
    rhs = shape_symbols(a, ps, p).samples + shape_symbols(b, ps, p).samples
    assert np.allclose(lhs, rhs, rtol=1e-12, atol=1e-12 * np.max(np.abs(rhs)))


def test_shape_symbol_shift_is_sample_shift():
    p = _params()
    ps = rrc_taps(p.rrc_beta, p.sps, p.rrc_span)
    rng = np.random.default_rng(14)
    syms = rng.standard_normal(p.M) + 1j * rng.standard_normal(p.M)
    base = shape_symbols(syms, ps, p).samples
    shifted = shape_symbols(np.roll(syms, 1), ps, p).samples
    assert np.allclose(shifted, np.roll(base, p.sps), atol=1e-10)


def test_shape_rejects_wrong_symbol_count():
    p = _params()
    ps = rrc_taps(p.rrc_beta, p.sps, p.rrc_span)
    with pytest.raises(ValueError, match="M\\*sps"):
        shape_symbols(np.ones(p.M - 1), ps, p)


def test_chirp_first_sample_and_hand_value():
    p = _params()
    s = gen_chirp(p).samples
    assert s[0] == 1.0 + 0.0j
    # n=32: pi * (10/1024) * 1024 = 10*pi -> back to 1
    assert s[32] == pytest.approx(1.0 + 0.0j, abs=1e-12)


def test_chirp_unit_modulus():
    for n in (64, 1024):
        p = _params(n=n, span=4 if n == 64 else 8)
        s = gen_chirp(p).samples
        assert np.max(np.abs(np.abs(s) - 1.0)) < 1e-12


def test_modulate_identity_payload():
    p = _params()
    s = gen_chirp(p)
    x = ComplexSignal(samples=np.ones(p.N, dtype=complex), f_s=p.f_s)
    assert np.array_equal(modulate(x, s).samples, s.samples)


def test_modulated_magnitude_is_payload_magnitude():
    p = _params()
    s = gen_chirp(p)
    rng = np.random.default_rng(15)
    x = ComplexSignal(rng.standard_normal(p.N) + 1j * rng.standard_normal(p.N), p.f_s)
    assert np.allclose(np.abs(modulate(x, s).samples), np.abs(x.samples), rtol=1e-12)


def test_modulate_rejects_length_mismatch():
    p = _params()
    s = gen_chirp(p)
    x = ComplexSignal(samples=np.ones(p.N - 1, dtype=complex), f_s=p.f_s)
    with pytest.raises(ValueError, match="length"):
        modulate(x, s)
