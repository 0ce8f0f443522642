"""Config parsing, layering, domain defaults, and spec resolution."""
import numpy as np
import pytest

from ratebandit.config import (CONTROLLER_NAMES, ENV_PREFIX, ConfigError,
                               PRESET_NAMES, load_spec, parse_config_text)
from ratebandit.controllers import (BanditController, FixedRate,
                                    GroupEliteRates, LookaheadRates,
                                    SelfAdaptiveRates)


def spec_for(text=None, **kw):
    kw.setdefault("environ", {})
    return load_spec(config_text=text, **kw)


class TestParse:
    def test_bare_keys_land_in_run(self):
        got = parse_config_text("problem = sphere\nruns = 3\n")
        assert got[("run", "problem")] == ("sphere", "<config>:1")
        assert got[("run", "runs")] == ("3", "<config>:2")

    def test_sections_and_comments(self):
        text = "\n".join([
            "# leading comment",
            "problem = ackley",
            "",
            "[bandit]",
            "; another comment style",
            "noise = 5",
            "[run]",
            "runs = 7",
        ])
        got = parse_config_text(text, source="exp.cfg")
        assert got[("bandit", "noise")] == ("5", "exp.cfg:6")
        assert got[("run", "runs")] == ("7", "exp.cfg:8")

    def test_case_insensitive_sections_and_keys(self):
        got = parse_config_text("[RUN]\nPROBLEM = Sphere\n")
        assert got[("run", "problem")] == ("Sphere", "<config>:2")

    def test_unknown_key_is_line_precise(self):
        with pytest.raises(ConfigError) as err:
            parse_config_text("problem = sphere\nfrobnicate = 3\n", "f.cfg")
        assert err.value.diagnostics == [
            "f.cfg:2: unknown key 'frobnicate' in section [run]"]

    def test_unknown_section_reported_once(self):
        with pytest.raises(ConfigError) as err:
            parse_config_text("[warp]\nspeed = 9\nfactor = 2\n")
        assert len(err.value.diagnostics) == 1
        assert "unknown section [warp]" in err.value.diagnostics[0]

    def test_malformed_lines_collected_together(self):
        with pytest.raises(ConfigError) as err:
            parse_config_text("problem sphere\n[oops\nruns = 1\n")
        diags = err.value.diagnostics
        assert len(diags) == 2
        assert "expected 'key = value'" in diags[0]
        assert "malformed section header" in diags[1]

    def test_duplicate_key_reported(self):
        with pytest.raises(ConfigError) as err:
            parse_config_text("runs = 1\nruns = 2\n")
        assert "duplicate key 'runs'" in err.value.diagnostics[0]


class TestEnvLayer:
    def test_env_override_applies(self):
        spec = spec_for("problem = sphere",
                        environ={ENV_PREFIX + "RUN_POPULATION": "55"})
        assert spec.population == 55

    def test_key_split_on_first_underscore(self):
        spec = spec_for("problem = nguyen1",
                        environ={ENV_PREFIX + "BANDIT_LOG_LOW": "-12"})
        assert spec.bandit.log_low == -12.0

    def test_unknown_env_name_rejected(self):
        with pytest.raises(ConfigError) as err:
            spec_for("problem = sphere",
                     environ={ENV_PREFIX + "FOO_BAR": "1"})
        assert "$RATEBANDIT_FOO_BAR" in err.value.diagnostics[0]

    def test_unprefixed_env_ignored(self):
        spec = spec_for("problem = sphere", environ={"RUN_POPULATION": "55"})
        assert spec.population == 101


class TestPrecedence:
    def test_file_beats_preset(self):
        spec = spec_for("problem = ackley\npopulation = 77",
                        preset="funcmin-desk")
        assert spec.population == 77
        assert spec.generations == 200  # still from the preset

    def test_env_beats_file(self):
        spec = spec_for("problem = sphere\npopulation = 77",
                        environ={ENV_PREFIX + "RUN_POPULATION": "88"})
        assert spec.population == 88

    def test_flag_beats_env(self):
        spec = spec_for("problem = sphere",
                        environ={ENV_PREFIX + "RUN_POPULATION": "88"},
                        flags={("run", "population"): "99"})
        assert spec.population == 99

    def test_defaults_fill_unset_only(self):
        spec = spec_for("problem = sphere\nelites = 3")
        assert spec.elites == 3
        assert spec.population == 101


class TestDomainDefaults:
    def test_funcmin_profile(self):
        spec = spec_for("problem = sphere")
        assert spec.domain == "funcmin"
        assert spec.population == 101
        assert spec.elites == 1
        assert spec.generations == 1000
        assert spec.selection == "truncation"
        assert spec.transform.identity is True
        assert spec.transform.c == 1.0
        assert spec.bandit.log_low == -100.0
        assert spec.bandit.log_high == 100.0
        assert spec.bandit.noise == 7.0

    def test_sr_profile(self):
        spec = spec_for("problem = nguyen1")
        assert spec.domain == "sr"
        assert spec.population == 1000
        assert spec.elites == 0
        assert spec.generations == 300
        assert spec.selection == "epsilon-lexicase"
        assert spec.transform.identity is False
        assert spec.transform.c == 0.01
        assert spec.bandit.log_low == -10.0
        assert spec.bandit.log_high == 0.0
        assert spec.bandit.noise == 3.0

    def test_explicit_value_wins_over_domain_default(self):
        spec = spec_for("problem = nguyen1\nselection = lexicase")
        assert spec.selection == "lexicase"

    def test_linear_gets_short_default_run(self):
        assert spec_for("problem = linear").generations == 100
        assert spec_for("problem = sphere").generations == 1000

    def test_linear_cap_yields_to_any_explicit_setting(self):
        spec = spec_for("problem = linear\ngenerations = 500")
        assert spec.generations == 500
        # a preset's generation count is explicit too
        spec = spec_for("problem = linear", preset="funcmin-desk")
        assert spec.generations == 200


class TestPresets:
    def test_names(self):
        assert set(PRESET_NAMES) == {"funcmin-desk", "sr-desk", "paper-full",
                                     "smoke"}

    def test_smoke_is_self_contained(self):
        spec = spec_for(preset="smoke")
        assert (spec.problem, spec.population, spec.elites) == ("sphere", 12, 1)
        assert (spec.generations, spec.runs, spec.dim) == (10, 2, 5)
        assert spec.controllers == ("bandit",)

    def test_sr_desk(self):
        spec = spec_for("problem = nguyen3", preset="sr-desk")
        assert spec.population == 500
        assert spec.generations == 150
        assert spec.runs == 10
        assert spec.selection == "epsilon-lexicase"

    def test_paper_full_is_domain_defaults_plus_runs(self):
        spec = spec_for("problem = rastrigin", preset="paper-full")
        assert spec.runs == 50
        assert spec.population == 101
        assert spec.generations == 1000

    def test_unknown_preset(self):
        with pytest.raises(ConfigError, match="unknown preset"):
            spec_for("problem = sphere", preset="galaxy")


class TestConversions:
    def test_bad_int_reports_location(self):
        with pytest.raises(ConfigError) as err:
            spec_for("problem = sphere\npopulation = 12.5", source="x.cfg")
        assert err.value.diagnostics[0].startswith("x.cfg:2:")

    def test_bool_spellings(self):
        for raw, expected in (("true", True), ("1", True), ("YES", True),
                              ("on", True), ("false", False), ("0", False),
                              ("No", False), ("off", False)):
            spec = spec_for(f"problem = sphere\nprobe = {raw}")
            assert spec.probe is expected
        with pytest.raises(ConfigError):
            spec_for("problem = sphere\nprobe = maybe")

    def test_floatlist(self):
        spec = spec_for("problem = sphere\n[probe]\nrates = 0.1, 0.5 ,2")
        assert spec.probe_rates == (0.1, 0.5, 2.0)
        with pytest.raises(ConfigError):
            spec_for("problem = sphere\n[probe]\nrates = ,")

    def test_optint(self):
        spec = spec_for("problem = sphere\n[probe]\nsamples_per_rate = ")
        assert spec.probe_samples is None
        spec = spec_for("problem = sphere\n[probe]\nsamples_per_rate = 7")
        assert spec.probe_samples == 7

    def test_nan_rejected(self):
        with pytest.raises(ConfigError):
            spec_for("problem = sphere\n[fixed]\nrate = nan")


class TestValidation:
    def test_missing_problem(self):
        with pytest.raises(ConfigError, match="missing problem id"):
            spec_for("runs = 3")

    def test_unknown_problem_lists_known(self):
        with pytest.raises(ConfigError, match="nguyen8"):
            spec_for("problem = cubic")

    def test_population_bounds(self):
        with pytest.raises(ConfigError, match="population size"):
            spec_for("problem = sphere\npopulation = 1")

    def test_elites_inside_population(self):
        with pytest.raises(ConfigError, match="elite count"):
            spec_for("problem = sphere\npopulation = 10\nelites = 10")

    def test_controllers_parsed_and_checked(self):
        spec = spec_for("problem = sphere\ncontrollers = fixed, samr")
        assert spec.controllers == ("fixed", "samr")
        with pytest.raises(ConfigError, match="unknown controller"):
            spec_for("problem = sphere\ncontrollers = fixed, warp")
        assert set(CONTROLLER_NAMES) == {"fixed", "samr", "gesmr", "lamr",
                                         "bandit"}

    def test_history_length_positive(self):
        with pytest.raises(ConfigError, match="reward window"):
            spec_for("problem = sphere\n[bandit]\nlen_history = 0")

    def test_log_interval_ordered(self):
        with pytest.raises(ConfigError, match="log_low"):
            spec_for("problem = sphere\n[bandit]\nlog_low = 5\nlog_high = -5")

    def test_transform_c_positive_unless_identity(self):
        with pytest.raises(ConfigError, match="offset"):
            spec_for("problem = nguyen1\n[transform]\nc = 0")
        spec = spec_for("problem = nguyen1\n[transform]\nidentity = true\nc = 0")
        assert spec.transform.identity is True

    def test_domain_key_cross_checks(self):
        with pytest.raises(ConfigError, match="function-minimization"):
            spec_for("problem = nguyen1\n[problem]\ndim = 10")
        with pytest.raises(ConfigError, match="symbolic-regression"):
            spec_for("problem = sphere\n[problem]\nmax_len = 100")
        # defaults for the other domain never trigger the check
        spec_for("problem = nguyen1")
        spec_for("problem = sphere")

    def test_multiple_diagnostics_collected(self):
        with pytest.raises(ConfigError) as err:
            spec_for("problem = sphere\npopulation = 1\ngenerations = 0")
        assert len(err.value.diagnostics) == 2


class TestSpecFactories:
    def test_make_problem_funcmin(self):
        p = spec_for("problem = ackley\n[problem]\ndim = 7").make_problem()
        assert p.name == "ackley" and p.dim == 7

    def test_make_problem_sr(self):
        text = "problem = nguyen5\n[problem]\nmax_len = 60"
        p = spec_for(text).make_problem()
        assert p.name == "nguyen5" and p.max_len == 60

    def test_loop_config_mirrors_spec(self):
        spec = spec_for("problem = sphere\npopulation = 20\nelites = 2\n"
                        "generations = 30")
        cfg = spec.loop_config()
        assert (cfg.population_size, cfg.elites, cfg.generations) == (20, 2, 30)
        assert cfg.transform == spec.transform

    def test_probe_config_mirrors_spec(self):
        spec = spec_for("problem = sphere\n[probe]\nkernel = 9\newma = 0.5")
        pc = spec.probe_config()
        assert pc.kernel == 9 and pc.ewma_rate == 0.5

    def test_make_controller_types(self):
        spec = spec_for("problem = sphere")
        seq = np.random.SeedSequence(5)
        assert isinstance(spec.make_controller("fixed", seq), FixedRate)
        assert isinstance(spec.make_controller("samr", seq), SelfAdaptiveRates)
        assert isinstance(spec.make_controller("gesmr", seq), GroupEliteRates)
        assert isinstance(spec.make_controller("lamr", seq), LookaheadRates)
        assert isinstance(spec.make_controller("bandit", seq),
                          BanditController)
        with pytest.raises(ValueError):
            spec.make_controller("warp", seq)

    def test_bandit_controller_construction_deterministic(self):
        spec = spec_for("problem = nguyen1")
        a = spec.make_controller("bandit", np.random.SeedSequence(5))
        b = spec.make_controller("bandit", np.random.SeedSequence(5))
        assert a.ensemble.to_json() == b.ensemble.to_json()

    def test_lamr_candidates_span_configured_range(self):
        spec = spec_for("problem = sphere\n[lamr]\nlow = 0.01\nhigh = 1\n"
                        "num_candidates = 3")
        c = spec.make_controller("lamr", np.random.SeedSequence(5))
        assert c.candidates == pytest.approx([0.01, 0.1, 1.0])
        assert c.lookahead == spec.lamr_lookahead == 100

    def test_fixed_rate_value(self):
        spec = spec_for("problem = sphere\n[fixed]\nrate = 0.7")
        assert spec.make_controller(
            "fixed", np.random.SeedSequence(1)).rate == 0.7


class TestEcho:
    def test_every_schema_key_rendered_once(self):
        spec = spec_for("problem = sphere")
        lines = list(spec.echo_lines())
        assert lines[0] == "[run]"
        assert lines[1] == "problem = sphere"
        headers = [l for l in lines if l.startswith("[")]
        assert headers == ["[run]", "[problem]", "[transform]", "[bandit]",
                           "[fixed]", "[samr]", "[gesmr]", "[lamr]", "[probe]"]
        assert "population = 101" in lines
        assert "samples_per_rate = " in lines
        assert "c = 1.0" in lines

    def test_echo_reflects_overrides(self):
        spec = spec_for("problem = nguyen2\nruns = 4")
        lines = list(spec.echo_lines())
        assert "runs = 4" in lines
        assert "problem = nguyen2" in lines
        assert "selection = epsilon-lexicase" in lines
