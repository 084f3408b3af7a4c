import json
import re
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hclab.cli import main
from hclab.config import KINDS, RunConfig, parse_config, parse_value, serialize_config
from hclab.errors import ConfigParseError
from hclab.experiments import ExperimentReport, SweepPlan, sharpness_sweep
from hclab.kernels import CurveSpec, KernelSpec, SharpConstant
from hclab.reporting import SCHEMA, emit_report, report_csv, strip_timing
from hclab.weights import build_weight

CONFIGS = Path(__file__).resolve().parents[1] / "configs"


class TestConfig:
    def test_rational_literal(self):
        assert parse_value("3/2") == Fraction(3, 2)
        assert parse_value("0.1") == Fraction(1, 10)

    def test_lists(self):
        assert parse_value("1/8, 1/16") == [Fraction(1, 8), Fraction(1, 16)]

    def test_unknown_kind(self):
        with pytest.raises(ConfigParseError):
            parse_config("[experiment]\nkind = nonsense\n")

    def test_malformed(self):
        with pytest.raises(ConfigParseError):
            parse_config("kind = sharpness\n")

    def test_shipped_configs_parse(self):
        for path in CONFIGS.glob("*.cfg"):
            cfg = parse_config(path.read_text())
            assert parse_config(serialize_config(cfg)) == cfg


names = st.from_regex(r"[a-z][a-z_]{0,8}", fullmatch=True)
numbers = st.fractions(max_denominator=1000).filter(lambda f: abs(f) < 10 ** 6)
words = names.filter(lambda s: s not in ("true", "false"))
values = st.one_of(numbers, words, st.lists(numbers, min_size=1, max_size=4))


@settings(max_examples=60, deadline=None)
@given(kind=st.sampled_from(KINDS),
       extra=st.dictionaries(names.filter(lambda s: s != "experiment"),
                             st.dictionaries(names, values, max_size=5), max_size=4))
def test_round_trip(kind, extra):
    cfg = RunConfig({"experiment": {"kind": kind}, **extra})
    assert parse_config(serialize_config(cfg)) == cfg


# ---------------------------------------------------------------------------
# command line

def _run(tmp_path, *argv):
    return main([*argv, "--out", str(tmp_path)])


class TestCLI:
    def test_classical_hardy(self, tmp_path):
        assert _run(tmp_path, "run", "--config", str(CONFIGS / "classical-hardy.cfg")) == 0
        data = json.loads((tmp_path / "classical-hardy.json").read_text())
        assert data["schema"] == SCHEMA
        assert data["report"]["theoretical_constant"] == 2.0
        assert data["report"]["constant_method"] == "closed-form"
        assert data["report"]["verdict"] == "sharp-confirmed"

    def test_divergent_kernel(self, tmp_path, capsys):
        assert _run(tmp_path, "constant", "--config", str(CONFIGS / "divergent-kernel.cfg")) == 0
        assert "constant=infinite" in capsys.readouterr().out

    def test_malformed(self, tmp_path):
        bad = tmp_path / "bad.cfg"
        bad.write_text("this is not [a config\n")
        assert _run(tmp_path, "run", "--config", str(bad)) == 1

    def test_missing_file(self, tmp_path):
        assert _run(tmp_path, "run", "--config", str(tmp_path / "nope.cfg")) == 1

    def test_bad_seed(self, tmp_path):
        assert _run(tmp_path, "sharpness", "--seed", "-1") == 1

    def test_all_formats(self, tmp_path):
        cfg = str(CONFIGS / "classical-hardy.cfg")
        assert _run(tmp_path, "run", "--config", cfg, "--format", "csv", "--format", "json", "--format", "svg") == 0
        for ext in ("csv", "json", "svg"):
            assert (tmp_path / f"classical-hardy.{ext}").exists()

    def test_same_seed_same_json(self, tmp_path):
        cfg = str(CONFIGS / "log-commutator.cfg")
        a, b = tmp_path / "a", tmp_path / "b"
        assert main(["run", "--config", cfg, "--seed", "7", "--out", str(a)]) == 0
        assert main(["run", "--config", cfg, "--seed", "7", "--out", str(b)]) == 0
        ja, jb = (d / "log-commutator.json" for d in (a, b))
        assert strip_timing(ja.read_text()) == strip_timing(jb.read_text())
        strip = lambda t: re.sub(r'"timing": \{[^}]*\}', "", t)
        assert strip(ja.read_text()) == strip(jb.read_text())


# ---------------------------------------------------------------------------
# report formats

EMPTY = ExperimentReport("empty", SharpConstant(1.0))
SWEEP = sharpness_sweep(SweepPlan(KernelSpec.constant(), CurveSpec.power(1.0), build_weight(0.0, "constant", 1), 2.0), "U")


class TestReports:
    def test_csv_empty(self):
        assert report_csv(EMPTY) == "eps,ratio,lower_bound\n"

    def test_csv_rows(self, tmp_path):
        path = emit_report(SWEEP, "csv", tmp_path, "sweep")
        raw = path.read_bytes()
        assert b"\r" not in raw
        rows = raw.decode().splitlines()
        assert len(rows) == 1 + 8 + 1
        assert rows[-1].startswith("limit,")
        assert float(rows[1].split(",")[0]) == 2.0 ** -3

    @pytest.mark.parametrize("lines", [[], [("a", 1.0)], [("a", 1.0), ("b", 2.0)]])
    def test_svg_reference_lines(self, tmp_path, lines):
        rep = ExperimentReport("r", None, SWEEP.sweep_points, reference_lines=lines)
        text = emit_report(rep, "svg", tmp_path, "plot").read_text()
        ids = re.findall(r'id="reference-line-(\d+)"', text)
        assert sorted(ids) == [str(i) for i in range(len(lines))]

    def test_svg_default_line(self, tmp_path):
        text = emit_report(SWEEP, "svg", tmp_path, "plot").read_text()
        assert len(re.findall(r'id="reference-line-\d+"', text)) == 1

    def test_json_strict(self, tmp_path):
        rep = ExperimentReport("inf", SharpConstant.infinite())
        data = json.loads(emit_report(rep, "json", tmp_path, "inf").read_text())
        assert data["schema"] == SCHEMA
        assert data["report"]["theoretical_constant"] == "infinite"
