import json

import pytest

from fmcwisac.params import DEFAULT_CONFIG, SystemConfig, derive_params, load_config


def test_default_derivation():
    p = derive_params(DEFAULT_CONFIG)
    assert p.alpha_norm == pytest.approx(10 / 1024, rel=1e-12)
    assert p.T_ch == pytest.approx(5.12e-6, rel=1e-12)
    assert p.alpha == pytest.approx(3.90625e14, rel=1e-12)
    assert p.sps == 4
    assert p.M == 256
    assert p.bin_width == pytest.approx(200e6 / 1024, rel=1e-12)


def test_unit_bandwidth_ratio():
    cfg = SystemConfig(f_c=77e9, B_ch=200e6, f_s=200e6, N=1024, R=50e6, rrc_beta=0.3, rrc_span=8)
    assert derive_params(cfg).alpha_norm == pytest.approx(1 / 1024, rel=1e-12)


@pytest.mark.parametrize("n", [64, 256, 512, 1024, 2048])
@pytest.mark.parametrize("b_ch", [5e7, 2e8, 2e9])
def test_alpha_norm_paths_agree(n, b_ch):
    cfg = SystemConfig(f_c=77e9, B_ch=b_ch, f_s=200e6, N=n, R=50e6, rrc_beta=0.3, rrc_span=8)
    p = derive_params(cfg)
    assert p.alpha_norm * p.N == pytest.approx(p.B_ch / p.f_s, rel=1e-12)
    assert p.T_ch * p.f_s == pytest.approx(p.N, rel=1e-12)


def test_derivation_is_pure():
    assert derive_params(DEFAULT_CONFIG) == derive_params(DEFAULT_CONFIG)


def test_rejects_non_power_of_two_n():
    cfg = SystemConfig(f_c=77e9, B_ch=2e9, f_s=200e6, N=1000, R=50e6, rrc_beta=0.3, rrc_span=8)
    with pytest.raises(ValueError, match="power of two"):
        derive_params(cfg)


def test_rejects_fractional_sps():
    cfg = SystemConfig(f_c=77e9, B_ch=2e9, f_s=200e6, N=1024, R=60e6, rrc_beta=0.3, rrc_span=8)
    with pytest.raises(ValueError, match="f_s/R"):
        derive_params(cfg)


def test_rejects_fractional_symbols_per_chirp():
    cfg = SystemConfig(f_c=77e9, B_ch=2e9, f_s=300e6, N=1024, R=100e6, rrc_beta=0.3, rrc_span=8)
    with pytest.raises(ValueError, match="N/sps"):
        derive_params(cfg)


@pytest.mark.parametrize("beta", [-0.1, 1.5])
def test_rejects_bad_rolloff(beta):
    cfg = SystemConfig(f_c=77e9, B_ch=2e9, f_s=200e6, N=1024, R=50e6, rrc_beta=beta, rrc_span=8)
    with pytest.raises(ValueError, match="rrc_beta"):
        derive_params(cfg)


def test_load_config_roundtrip(tmp_path):
    path = tmp_path / "sys.json"
    path.write_text(
        json.dumps(
            {
                "f_c": 77e9,
                "B_ch": 2e9,
                "f_s": 200e6,
                "N": 512,
                "R": 25e6,
                "rrc_beta": 0.3,
                "rrc_span": 8,
            }
        )
    )
    cfg = load_config(str(path))
    assert cfg.N == 512
    assert derive_params(cfg).sps == 8


def test_load_config_rejects_unknown_key(tmp_path):
    path = tmp_path / "sys.json"
    path.write_text(json.dumps({"f_c": 1.0, "bandwidth": 2.0}))
    with pytest.raises(ValueError, match="bandwidth"):
        load_config(str(path))


def test_load_config_rejects_missing_key(tmp_path):
    path = tmp_path / "sys.json"
    path.write_text(json.dumps({"f_c": 77e9}))
    with pytest.raises(ValueError, match="missing config key"):
        load_config(str(path))
