"""Config parsing and CLI orchestration behavior."""

import filecmp
import random
from pathlib import Path

import pytest
from click.testing import CliRunner

from simaspect.cli import main
from simaspect.config import load_config
from simaspect.errors import ConfigError

GOLDEN = Path(__file__).parent / "data" / "golden"

MINI_TOPICS = {
    "food": ["food", "pizza", "pasta", "tasty", "sauce", "cheese"],
    "staff": ["staff", "waiter", "friendly", "service", "polite", "manager"],
}


def make_mini_project(root: Path, *, config_extra: str = "", test_rows=None) -> Path:
    """A tiny two-category project that trains in well under a second."""
    rng = random.Random(3)
    lines = []
    for _ in range(60):
        for vocab in MINI_TOPICS.values():
            lines.append(" ".join(rng.choices(vocab, k=6)) + ".")
    (root / "corpus.txt").write_text("\n".join(lines) + "\n", encoding="utf-8")
    rows = test_rows if test_rows is not None else [
        ("The pizza sauce was tasty.", "food"),
        ("Cheese and pasta, great food.", "food"),
        ("The waiter was friendly and polite.", "staff"),
        ("Service by the manager was great.", "staff"),
    ]
    tsv = "sentence_text\tgold_category\n" + "\n".join(f"{t}\t{g}" for t, g in rows)
    (root / "test.tsv").write_text(tsv + "\n", encoding="utf-8")
    config = f"""
[paths]
raw_corpus = corpus.txt
filtered_corpus = out/filtered.txt
model = out/vectors.txt
test_data = test.tsv
output_attention = out/output1.tsv
output_categories = out/output2.tsv
aspect_lexicon = out/aspects.tsv
eval_report = out/eval.tsv
timing_report = out/timing.tsv
expanded_groups = out/groups.tsv
plot_csv = out/plot.csv

[train]
dimensions = 16
window = 4
negative_samples = 3
epochs = 5
min_count = 2
seed = 5

[groups]
food = food
staff = staff
{config_extra}
"""
    path = root / "config.ini"
    path.write_text(config, encoding="utf-8")
    return path


class TestLoadConfig:
    def test_defaults_mirror_published_settings(self, tmp_path):
        cfg_path = tmp_path / "c.ini"
        cfg_path.write_text("[groups]\nfood = food\n", encoding="utf-8")
        cfg = load_config(cfg_path)
        assert (cfg.train.dimensions, cfg.train.window) == (200, 5)
        assert (cfg.train.negative_samples, cfg.train.epochs) == (5, 15)
        assert cfg.aggregation == "mean"
        assert cfg.mode.kind == "direct"
        assert cfg.threads == 1

    def test_group_order_and_words(self, tmp_path):
        p = tmp_path / "c.ini"
        p.write_text("[groups]\nstaff = staff waiter\nfood = food\n", encoding="utf-8")
        cfg = load_config(p)
        assert cfg.group_order == ["staff", "food"]
        assert cfg.groups[0].words == ("staff", "waiter")

    def test_group_words_are_normalized_like_the_corpus(self, tmp_path):
        p = tmp_path / "c.ini"
        p.write_text(
            "[preprocess]\nstemmer = suffix_stripping\n[groups]\nfood = Restaurants\n",
            encoding="utf-8",
        )
        cfg = load_config(p)
        assert cfg.groups[0].words == ("restaur",)

    def test_missing_groups(self, tmp_path):
        p = tmp_path / "c.ini"
        p.write_text("[train]\nseed = 1\n", encoding="utf-8")
        with pytest.raises(ConfigError):
            load_config(p)

    def test_group_empty_after_preprocessing(self, tmp_path):
        p = tmp_path / "c.ini"
        p.write_text("[groups]\njunk = the and\n", encoding="utf-8")
        with pytest.raises(ConfigError):
            load_config(p)

    def test_unknown_section(self, tmp_path):
        p = tmp_path / "c.ini"
        p.write_text("[groups]\nfood = food\n[extra]\nx = 1\n", encoding="utf-8")
        with pytest.raises(ConfigError):
            load_config(p)

    def test_unknown_key(self, tmp_path):
        p = tmp_path / "c.ini"
        p.write_text("[groups]\nfood = food\n[train]\nwindowsize = 5\n", encoding="utf-8")
        with pytest.raises(ConfigError):
            load_config(p)

    def test_bad_boolean(self, tmp_path):
        p = tmp_path / "c.ini"
        p.write_text("[preprocess]\nlowercase = maybe\n[groups]\nfood = food\n", encoding="utf-8")
        with pytest.raises(ConfigError):
            load_config(p)

    def test_bad_integer(self, tmp_path):
        p = tmp_path / "c.ini"
        p.write_text("[train]\nepochs = many\n[groups]\nfood = food\n", encoding="utf-8")
        with pytest.raises(ConfigError):
            load_config(p)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config(tmp_path / "absent.ini")

    def test_paths_resolve_relative_to_config(self, tmp_path):
        sub = tmp_path / "nested"
        sub.mkdir()
        p = sub / "c.ini"
        p.write_text("[paths]\nmodel = m.txt\n[groups]\nfood = food\n", encoding="utf-8")
        cfg = load_config(p)
        assert cfg.paths["model"] == (sub / "m.txt").resolve()

    def test_label_unions_parse(self, tmp_path):
        p = tmp_path / "c.ini"
        p.write_text(
            "[eval]\nlabel_unions = taste+smell:taste,smell\n[groups]\nfood = food\n",
            encoding="utf-8",
        )
        cfg = load_config(p)
        assert cfg.label_unions == {"taste+smell": frozenset({"taste", "smell"})}

    def test_overrides(self, tmp_path):
        p = tmp_path / "c.ini"
        p.write_text("[train]\nseed = 1\n[groups]\nfood = food\n", encoding="utf-8")
        cfg = load_config(p, threads=4, seed=99)
        assert cfg.threads == 4
        assert cfg.train.seed == 99

    def test_duplicate_category_rejected(self, tmp_path):
        p = tmp_path / "c.ini"
        # configparser itself rejects duplicate keys within a section
        p.write_text("[groups]\nfood = food\nfood = meal\n", encoding="utf-8")
        with pytest.raises(ConfigError):
            load_config(p)


def run_cli(*args):
    return CliRunner().invoke(main, list(args), catch_exceptions=False)


class TestCli:
    def test_pipeline_end_to_end(self, tmp_path):
        cfg = make_mini_project(tmp_path)
        result = run_cli("--config", str(cfg), "pipeline")
        assert result.exit_code == 0, result.output
        for artifact in ("filtered.txt", "vectors.txt", "output1.tsv",
                         "output2.tsv", "aspects.tsv", "eval.tsv", "plot.csv"):
            assert (tmp_path / "out" / artifact).is_file()
        assert "pipeline complete" in result.output

    def test_train_is_byte_reproducible(self, tmp_path):
        cfg = make_mini_project(tmp_path)
        model_path = tmp_path / "out" / "vectors.txt"
        assert run_cli("--config", str(cfg), "filter").exit_code == 0
        assert run_cli("--config", str(cfg), "train").exit_code == 0
        first = model_path.read_bytes()
        assert run_cli("--config", str(cfg), "train").exit_code == 0
        assert model_path.read_bytes() == first

    def test_pipeline_equals_stage_composition(self, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        a.mkdir(), b.mkdir()
        cfg_a = make_mini_project(a)
        cfg_b = make_mini_project(b)
        assert run_cli("--config", str(cfg_a), "pipeline").exit_code == 0
        for cmd in ("filter", "train", "annotate", "classify", "aspects", "eval"):
            result = run_cli("--config", str(cfg_b), cmd)
            assert result.exit_code == 0, (cmd, result.output)
        for artifact in ("filtered.txt", "vectors.txt", "output1.tsv",
                         "output2.tsv", "aspects.tsv", "eval.tsv"):
            assert filecmp.cmp(a / "out" / artifact, b / "out" / artifact, shallow=False), artifact

    def test_filter_keywords_reduce_corpus(self, tmp_path):
        cfg = make_mini_project(tmp_path, config_extra="[filter]\nkeywords = pizza\n")
        result = run_cli("--config", str(cfg), "filter")
        assert result.exit_code == 0
        kept = (tmp_path / "out" / "filtered.txt").read_text().splitlines()
        assert 0 < len(kept) < 120
        assert all("pizza" in line for line in kept)

    def test_eval_unknown_gold_label_fails_with_diagnostic(self, tmp_path):
        cfg = make_mini_project(
            tmp_path,
            test_rows=[("The pizza was tasty.", "food"), ("Nice place.", "ambience")],
        )
        runner = CliRunner()
        assert runner.invoke(main, ["--config", str(cfg), "pipeline"]).exit_code != 0
        result = runner.invoke(main, ["--config", str(cfg), "eval"])
        assert result.exit_code != 0
        assert "UnknownGoldLabel" in result.output + result.stderr

    def test_config_error_before_any_output(self, tmp_path):
        cfg = make_mini_project(tmp_path)
        # annotate needs the model; nothing trained yet, so it must fail
        # without creating or truncating its output file
        result = CliRunner().invoke(main, ["--config", str(cfg), "annotate"])
        assert result.exit_code != 0
        assert not (tmp_path / "out" / "output1.tsv").exists()

    def test_expand_and_annotate_with_groups_file(self, tmp_path):
        cfg = make_mini_project(tmp_path)
        assert run_cli("--config", str(cfg), "filter").exit_code == 0
        assert run_cli("--config", str(cfg), "train").exit_code == 0
        result = run_cli("--config", str(cfg), "expand", "-k", "2")
        assert result.exit_code == 0
        groups_file = tmp_path / "out" / "groups.tsv"
        text = groups_file.read_text()
        assert text.startswith("food\tfood ")
        result = run_cli(
            "--config", str(cfg), "annotate", "--groups-file", str(groups_file)
        )
        assert result.exit_code == 0
        assert (tmp_path / "out" / "output1.tsv").is_file()

    def test_eval_with_union_gold_labels(self, tmp_path):
        cfg = make_mini_project(
            tmp_path,
            config_extra="[eval]\nlabel_unions = both:food,staff\n",
            test_rows=[
                ("The pizza sauce was tasty.", "both"),
                ("The waiter was friendly.", "both"),
                ("Cheese and pasta, great food.", "food"),
            ],
        )
        result = run_cli("--config", str(cfg), "pipeline")
        assert result.exit_code == 0, result.output
        report = (tmp_path / "out" / "eval.tsv").read_text()
        both_row = next(l for l in report.splitlines() if l.startswith("both\t"))
        # both union sentences are predicted food or staff, so recall is 1
        assert both_row.split("\t")[2] == "1.000000"

    def test_bench_writes_timing_report(self, tmp_path):
        cfg = make_mini_project(tmp_path)
        result = run_cli("--config", str(cfg), "bench")
        assert result.exit_code == 0, result.output
        timing = (tmp_path / "out" / "timing.tsv").read_text().splitlines()
        stages = [line.split("\t")[0] for line in timing]
        for stage in ("preprocess", "train", "annotate", "classify",
                      "evaluate", "annotate+classify"):
            assert stage in stages

    def test_threads_flag_accepted(self, tmp_path):
        cfg = make_mini_project(tmp_path)
        result = run_cli("--config", str(cfg), "--threads", "2", "pipeline")
        assert result.exit_code == 0

    def test_seed_override_changes_model(self, tmp_path):
        cfg = make_mini_project(tmp_path)
        model_path = tmp_path / "out" / "vectors.txt"
        run_cli("--config", str(cfg), "filter")
        run_cli("--config", str(cfg), "train")
        first = model_path.read_bytes()
        run_cli("--config", str(cfg), "--seed", "77", "train")
        assert model_path.read_bytes() != first

    def test_python_kernel_option(self, tmp_path):
        cfg = make_mini_project(tmp_path)
        run_cli("--config", str(cfg), "filter")
        result = run_cli("--config", str(cfg), "train", "--kernel", "python")
        assert result.exit_code == 0

    def test_golden_config_parses(self):
        cfg = load_config(GOLDEN / "config.ini")
        assert cfg.group_order == ["food", "staff", "ambience"]
