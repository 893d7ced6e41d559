import json

import openpyxl

from app import EXIT_INVALID, EXIT_LIMIT, EXIT_OK, main


def _run(capsys, argv):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def _error(err):
    return json.loads(err.strip().splitlines()[-1])


def test_torsion_report(capsys):
    code, out, _ = _run(capsys, ['torsion', '--a', '0', '--b', '1'])
    assert code == EXIT_OK
    document = json.loads(out)
    assert document['order'] == "6"
    assert document['structure'] == ["6"]
    assert document['affine_point_count'] == "5"
    assert document['reduction']['gcd'] == "6"


def test_output_is_deterministic(capsys):
    argv = ['classgroup', '--d', '-23']
    _, first, _ = _run(capsys, argv)
    _, second, _ = _run(capsys, argv)
    assert first == second
    document = json.loads(first)
    assert document['h'] == "3"
    assert document['divisors'] == ["3"]
    assert document['l_ranks'] == {'2': "0", '3': "1"}


def test_specialize_and_cubic(capsys):
    _, out, _ = _run(capsys, ['specialize', '--d', '-26', '--u', '1', '--w', '3', '--p', '3'])
    document = json.loads(out)
    assert document['order'] == "3"
    assert document['form'] == ["3", "2", "9"]

    _, out, _ = _run(capsys, ['cubic', '--m', '7'])
    assert json.loads(out)['h'] == "3"


def test_descent_report(capsys):
    code, out, _ = _run(capsys, ['descent', '--n', '17', '--search-bound', '60'])
    assert code == EXIT_OK
    document = json.loads(out)
    assert document['f2_rank'] == "2"
    assert document['selmer_claim']['claimed_order'] == "9"
    assert document['scope'] == "lower-bound subgroup"


def test_invalid_input_exit_code(capsys):
    code, out, err = _run(capsys, ['classgroup', '--d', '4'])
    assert code == EXIT_INVALID
    assert out == ""
    assert _error(err)['error'] == "not-imaginary"

    code, _, err = _run(capsys, ['--budget', '0', 'classgroup', '--d', '-23'])
    assert code == EXIT_INVALID
    assert _error(err)['error'] == "bad-budget"


def test_argument_errors_exit_two(capsys):
    assert main(['torsion', '--a', '0']) == EXIT_INVALID
    assert main(['no-such-command']) == EXIT_INVALID
    capsys.readouterr()


def test_budget_exhaustion_exit_code(capsys):
    code, out, err = _run(capsys, ['--budget', '10', 'classgroup', '--d', '-10007'])
    assert code == EXIT_LIMIT
    assert out == ""
    assert "message" in _error(err)


def test_cache_round_trip(capsys, tmp_path):
    path = tmp_path / "cache.json"
    argv = ['classgroup', '--d', '-26', '--cache', str(path)]
    _, uncached, _ = _run(capsys, ['classgroup', '--d', '-26'])
    _, first, _ = _run(capsys, argv)
    _, second, _ = _run(capsys, argv)
    assert uncached == first == second
    assert list(json.loads(path.read_text())) == ["classgroup d=-26"]


def test_cache_from_environment(capsys, tmp_path, monkeypatch):
    path = tmp_path / "env-cache.json"
    monkeypatch.setenv('CLASSFORGE_CACHE', str(path))
    code, _, _ = _run(capsys, ['torsion', '--a', '0', '--b', '4'])
    assert code == EXIT_OK
    assert "torsion a=0 b=4" in json.loads(path.read_text())


def test_locked_cache(capsys, tmp_path):
    path = tmp_path / "cache.json"
    (tmp_path / "cache.json.lock").write_text("")
    code, _, err = _run(capsys, ['--cache', str(path), 'torsion', '--a', '0', '--b', '1'])
    assert code == EXIT_INVALID
    assert _error(err)['error'] == "cache-locked"


def test_scan_csv_to_file(capsys, tmp_path):
    out_path = tmp_path / "scan.csv"
    code, out, _ = _run(capsys, ['scan', '--n', '1', '--l', '2', '--m-from', '2', '--m-to', '5',
                                 '--format', 'csv', '--out', str(out_path)])
    assert code == EXIT_OK
    assert out == ""
    lines = out_path.read_text().splitlines()
    assert lines[0].startswith("m,raw,d,discriminant,status")
    assert [line.split(",")[0] for line in lines[1:]] == ["2", "3", "4", "5"]


def test_scan_xlsx(capsys, tmp_path):
    code, _, err = _run(capsys, ['scan-cubic', '--from', '2', '--to', '5', '--format', 'xlsx'])
    assert code == EXIT_INVALID
    assert _error(err)['error'] == "missing-out"

    out_path = tmp_path / "scan.xlsx"
    code, _, _ = _run(capsys, ['scan-cubic', '--from', '2', '--to', '5', '--format', 'xlsx',
                               '--out', str(out_path)])
    assert code == EXIT_OK
    assert openpyxl.load_workbook(out_path).sheetnames == ['Cubic', 'Summary']


def test_scan_json(capsys):
    code, out, _ = _run(capsys, ['scan', '--n', '1', '--l', '3', '--m-from', '3', '--m-to', '3'])
    assert code == EXIT_OK
    row, = json.loads(out)['rows']
    assert row['specialization'] == {'u': "1", 'w': "3", 'order': "3", 'form': ["3", "2", "9"]}


def test_cached_result_does_not_mask_budget_exhaustion(capsys, tmp_path):
    path = tmp_path / "cache.json"
    code, full, _ = _run(capsys, ['--cache', str(path), 'classgroup', '--d', '-10007'])
    assert code == EXIT_OK

    argv = ['--cache', str(path), '--budget', '10', 'classgroup', '--d', '-10007']
    uncached = _run(capsys, ['--budget', '10', 'classgroup', '--d', '-10007'])
    cached = _run(capsys, argv)
    assert cached[0] == uncached[0] == EXIT_LIMIT
    assert cached[1] == uncached[1] == ""
    assert list(json.loads(path.read_text())) == ["classgroup d=-10007"]

    code, out, _ = _run(capsys, ['--cache', str(path), '--budget', '100000000', 'classgroup', '--d', '-10007'])
    assert (code, out) == (EXIT_OK, full)


def test_budget_is_part_of_cache_key(capsys, tmp_path):
    path = tmp_path / "cache.json"
    _run(capsys, ['--cache', str(path), '--budget', '1000000', 'classgroup', '--d', '-26'])
    _run(capsys, ['--cache', str(path), 'classgroup', '--d', '-26'])
    assert sorted(json.loads(path.read_text())) == ["classgroup d=-26", "classgroup d=-26 work_budget=1000000"]
