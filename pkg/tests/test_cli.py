import json

import pytest

from ggt import __version__
from ggt.cli import EXIT_FAILED, EXIT_OK, EXIT_USAGE, main


def run_json(capsys, argv):
    code = main(argv + ["--json"])
    return code, json.loads(capsys.readouterr().out)


def test_version(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
    assert __version__ in capsys.readouterr().out


def test_missing_subcommand():
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2


def test_stallings(capsys):
    code, data = run_json(capsys, ["stallings", "--gens", "aa,ab,aB", "--word", "ba"])
    assert code == EXIT_OK
    assert data["kind"] == "stallings"
    assert data["results"]["contains"] is True


def test_stallings_dot(capsys):
    assert main(["stallings", "--gens", "aa", "--dot"]) == EXIT_OK
    assert "digraph" in capsys.readouterr().out


def test_malnormal_text(capsys):
    assert main(["malnormal", "--gens", "a,b", "--rank", "3", "--radius", "1", "--cap", "3"]) == EXIT_OK
    assert capsys.readouterr().out.startswith("no violation")


def test_equal(capsys):
    assert main(["equal", "abAB", "CC", "--genus", "3"]) == EXIT_OK
    assert capsys.readouterr().out.startswith("equal")
    code, data = run_json(capsys, ["equal", "ab", "ba", "--rank", "2"])
    assert data["results"]["verdict"] == "distinct"


def test_bad_word_is_usage_error(capsys):
    assert main(["equal", "a1", "a", "--genus", "3"]) == EXIT_USAGE
    assert "invalid letter" in capsys.readouterr().err


def test_letter_outside_rank_is_usage_error(capsys):
    assert main(["equal", "d", "a", "--genus", "3"]) == EXIT_USAGE
    assert "outside" in capsys.readouterr().err


def test_malnormal_radius_must_be_positive(capsys):
    assert main(["malnormal", "--gens", "a", "--rank", "2", "--radius", "0", "--cap", "3"]) == EXIT_USAGE
    assert "ggt malnormal" in capsys.readouterr().err


def test_ball(capsys):
    code, data = run_json(capsys, ["ball", "--radius", "2"])
    assert code == EXIT_OK
    assert data["results"]["vertices"] == 17
    assert data["results"]["spheres"] == [1, 4, 12]


def test_dhat_free_factor(capsys):
    code, data = run_json(capsys, ["dhat", "--case", "f2-in-f4", "--radius", "2", "--h", "a"])
    assert code == EXIT_OK
    assert data["results"]["status"] == "infinite_within_ball"


def test_dhat_needs_setting(capsys):
    assert main(["dhat", "--h", "a"]) == EXIT_USAGE
    assert "--genus" in capsys.readouterr().err


def test_qm_eval(capsys):
    assert main(["qm-eval", "--pattern", "ab", "--word", "abab", "--homogenize", "3"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "value: 2" in out
    assert "homogenized" in out


def test_qm_defect_exhaustive(capsys):
    code, data = run_json(capsys, ["qm-defect", "--pattern", "a", "--maxlen", "2", "--exhaustive"])
    assert code == EXIT_OK
    assert data["results"]["value"] == "0"
    assert data["results"]["pairs_examined"] == 17 * 17


def test_ggh_eval(tmp_path, capsys):
    model = tmp_path / "model.toml"
    model.write_text('lambda = "1/2"\n[[regions]]\nid = "A"\nmeasure = "1/2"\n[[regions]]\nid = "complement"\nmeasure = "1/2"\n')
    assert main(["ggh-eval", "--model", str(model), "--pattern", "ab", "--tuple", "abAB"]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "1/2"


def test_ggh_lemma(capsys):
    code, data = run_json(capsys, ["ggh-lemma", "--steps", "4"])
    assert code == EXIT_OK
    assert data["passed"] is True
    assert [row["residual"] for row in data["results"]["rows"]] == ["1/4", "1/8", "1/16", "1/32"]


def test_verify_hom_search_fails_for_genus_three(capsys):
    assert main(["verify-hom", "--search-genus", "3", "--max-image-length", "1"]) == EXIT_FAILED
    assert "no retraction" in capsys.readouterr().out


def test_verify_hom_spec(tmp_path, capsys):
    spec = tmp_path / "hom.toml"
    spec.write_text(
        '[retraction]\nimages = ["a", "b", "", "", ""]\n'
        "[retraction.source]\ngenus = 5\n[retraction.target]\nrank = 2\n"
    )
    code, data = run_json(capsys, ["verify-hom", "--spec", str(spec)])
    assert code == EXIT_FAILED
    assert data["results"]["verdict"]["status"] == "refuted"


def test_run_requires_seed(capsys):
    assert main(["run", "--case", "brooks-suite"]) == EXIT_USAGE
    assert "seed" in capsys.readouterr().err


def test_run_spec_file(tmp_path, capsys):
    spec = tmp_path / "case.toml"
    spec.write_text('id = "word-problem"\nmax_length = 2\n')
    assert main(["run", "--spec", str(spec)]) == EXIT_OK
    assert capsys.readouterr().out.startswith("case word-problem: PASS")


def test_missing_file(capsys):
    assert main(["run", "--spec", "/nonexistent/case.toml"]) == EXIT_USAGE
    assert "cannot read" in capsys.readouterr().err
