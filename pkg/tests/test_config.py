import json

import numpy as np
import pytest

from phototactile.config import Config, config_from_dict, load_config
from phototactile.errors import ConfigError
from phototactile.experiments import run_ramp
from phototactile.optics import LinearOptics, LookupOptics, write_sweep_csv


def write(tmp_path, doc, name="cfg.json"):
    path = tmp_path / name
    path.write_text(doc if isinstance(doc, str) else json.dumps(doc))
    return path


class TestDefaults:
    @pytest.mark.parametrize("doc", ["", "{}", "  \n"])
    def test_empty_document(self, tmp_path, doc):
        cfg = load_config(write(tmp_path, doc))
        assert cfg == Config()

    def test_default_values(self):
        cfg = load_config("default")
        assert (cfg.material.c10, cfg.material.c01) == (-3.335e-5, 1.218e-2)
        assert cfg.geometry.width_mm == 22.0 and cfg.geometry.gap0_mm == 2.0
        assert (cfg.optics.a, cfg.optics.b) == pytest.approx((1.9374, -1.8875), rel=1e-14)
        assert cfg.noise_rms == 0.0144 and cfg.seed == 0


class TestValidation:
    def test_kappa_out_of_range(self):
        with pytest.raises(ConfigError, match="geometry.kappa"):
            config_from_dict({"geometry": {"kappa": 1.5}})

    def test_noise_zero_is_valid(self):
        cfg = config_from_dict({"noise_rms": 0})
        rec = run_ramp(cfg)
        assert np.all(rec.voltage.samples == run_ramp(cfg, noise_rms=0.0).voltage.samples)

    @pytest.mark.parametrize("doc, fld", [
        ({"colour": 1}, "config"),
        ({"material": {"c11": 1.0}}, "material"),
        ({"optics": {"pigment": {"grey": 0.5}}}, "optics.pigment"),
        ({"noise_rms": -0.1}, "noise_rms"),
        ({"noise_rms": "loud"}, "noise_rms"),
        ({"seed": 1.5}, "seed"),
        ({"seed": -2}, "seed"),
        ({"geometry": {"width_mm": True}}, "geometry.width_mm"),
        ({"optics": {"variant": "laser"}}, "optics.variant"),
        ({"optics": {"out_of_range": 3}}, "optics.out_of_range"),
        ({"detector": {"on_threshold": 0.01}}, "detector.on_threshold"),
        ({"optics": {"ref_white_fraction": 2}}, "optics.ref_white_fraction"),
    ])
    def test_field_named_errors(self, doc, fld):
        with pytest.raises(ConfigError) as info:
            config_from_dict(doc)
        assert str(info.value).startswith(fld)

    def test_parse_error(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config(write(tmp_path, "{not json"))

    def test_missing_file_is_os_error(self, tmp_path):
        with pytest.raises(OSError):
            load_config(tmp_path / "absent.json")


class TestRoundTrip:
    def test_echo_and_reload(self, tmp_path):
        cfg = config_from_dict({"geometry": {"kappa": 0.5}, "seed": 9,
                                "optics": {"pigment": {"white_fraction": 1.0}}})
        again = load_config(write(tmp_path, cfg.to_json()))
        assert again == cfg
        assert again.to_json() == cfg.to_json()
        a, b = run_ramp(cfg), run_ramp(again)
        assert a.to_csv() == b.to_csv()

    def test_pigment_scaling_applied(self):
        cfg = config_from_dict({"optics": {"pigment": {"white_fraction": 1.0}}})
        assert cfg.optics.a == pytest.approx(2.3845, abs=5e-5)
        assert isinstance(cfg.base_optics, LinearOptics)

    def test_lookup_variant(self, tmp_path):
        x = np.linspace(1.0, 2.0, 11)
        write_sweep_csv(tmp_path / "sweep.csv", x, 1.9374 * x - 1.8875)
        path = write(tmp_path, {"optics": {"variant": "lookup", "lookup_csv": "sweep.csv"}})
        cfg = load_config(path)
        assert isinstance(cfg.optics, LookupOptics)
        again = load_config(write(tmp_path, cfg.to_json(), "echo.json"))
        assert again.optics == cfg.optics

    def test_lookup_missing_csv(self, tmp_path):
        path = write(tmp_path, {"optics": {"variant": "lookup", "lookup_csv": "nope.csv"}})
        with pytest.raises(ConfigError, match="optics.lookup_csv"):
            load_config(path)
