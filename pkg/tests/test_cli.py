import json
import pytest
from palindromic_cf import settings
from palindromic_cf.classifier4 import canonical_matrix
from palindromic_cf.cli import main
from palindromic_cf.exactmath import matrix
from palindromic_cf.serialization import matrix_to_json


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out) if out.strip() else None


def write_example(capsys, tmp_path, i, seed=None):
    argv = ['class-example', '--i', str(i)]
    if seed is not None:
        argv += ['--seed', str(seed)]
    code, data = run(capsys, *argv)
    assert code == 0
    path = tmp_path / f'example{i}.json'
    path.write_text(json.dumps(data), encoding='utf-8')
    return path, data


def test_construct(capsys):
    for n, p in ((2, 5), (4, 17)):
        code, data = run(capsys, 'construct', '--n', str(n))
        assert code == 0
        assert data['p'] == p
        assert data['report']['kind'] == 'cyclic'
        assert data['report']['mu_product'] == '1'


def test_construct_rejects_n_1(capsys):
    with pytest.raises(SystemExit) as exc:
        main(['construct', '--n', '1'])
    assert exc.value.code == 2


def test_construct_with_operator(capsys):
    try:
        code, data = run(capsys, 'construct', '--n', '2', '--with-A',
                         '--bound', '2', '--workers', '1')
    finally:
        settings.reset_to_defaults()
    assert code == 0
    assert 'A' in data


def test_check_symmetry(capsys, tmp_path):
    path, _ = write_example(capsys, tmp_path, 1)
    code, data = run(capsys, 'check-symmetry', '--cf', str(path), '--g', str(path))
    assert code == 0
    assert data['kind'] == 'cyclic'
    assert data['proper'] is True
    identity = tmp_path / 'identity.json'
    identity.write_text(json.dumps(matrix_to_json(matrix(
        [[int(i == j) for j in range(4)] for i in range(4)]))))
    code, data = run(capsys, 'check-symmetry', '--cf', str(path), '--g', str(identity))
    assert code == 0
    assert data['kind'] == 'dirichlet'


def test_check_symmetry_not_a_symmetry(capsys, tmp_path):
    path, _ = write_example(capsys, tmp_path, 1)
    G = canonical_matrix(1).as_mutable()
    G[3, 0] = 1
    perturbed = tmp_path / 'perturbed.json'
    perturbed.write_text(json.dumps(matrix_to_json(G)))
    code, data = run(capsys, 'check-symmetry', '--cf', str(path), '--g', str(perturbed))
    assert code == 1
    assert data == {'result': 'not-a-symmetry'}


def test_check_symmetry_malformed_input(capsys, tmp_path):
    path, _ = write_example(capsys, tmp_path, 1)
    broken = tmp_path / 'broken.json'
    broken.write_text('[["1", "0"], ')
    code, _ = run(capsys, 'check-symmetry', '--cf', str(path), '--g', str(broken))
    assert code == 2


def test_classify4(capsys, tmp_path):
    for i in (2, 7):
        path, example = write_example(capsys, tmp_path, i, seed=i)
        code, data = run(capsys, 'classify4', '--cf', str(path), '--g', str(path))
        assert code == 0
        X = matrix(data['X'])
        G = matrix(example['G'])
        assert X * G * X.inv() == matrix(data['G_canonical'])
        assert data['case'] in data['matches']
        assert 'normalized_cf' in data


def test_classify4_improper_symmetry(capsys, tmp_path):
    path, _ = write_example(capsys, tmp_path, 1)
    square = tmp_path / 'square.json'
    square.write_text(json.dumps(matrix_to_json(canonical_matrix(1) ** 2)))
    code, _ = run(capsys, 'classify4', '--cf', str(path), '--g', str(square))
    assert code == 1


def test_classify4_iteration_cap(capsys, tmp_path):
    path, _ = write_example(capsys, tmp_path, 3, seed=5)
    settings.max_iterations = 0
    try:
        code, _ = run(capsys, 'classify4', '--cf', str(path), '--g', str(path))
    finally:
        settings.reset_to_defaults()
    assert code == 3


def test_sail2d(capsys):
    code, data = run(capsys, 'sail2d', '0', '2', '1')
    assert code == 0
    assert data['preperiod'] == ['1']
    assert data['period'] == ['2']
    assert data['palindromic'] is True
    assert data['trace'] == '0'
    code, data = run(capsys, 'sail2d', '4', '37', '7')
    assert data['period'] == ['1', '2', '3']
    assert data['palindromic'] is False
    assert data['trace'] == '8/7'


def test_sail2d_rational_input(capsys):
    code, _ = run(capsys, 'sail2d', '1', '4', '1')
    assert code == 2


def test_canonical(capsys):
    code, data = run(capsys, 'canonical')
    assert code == 0
    assert [entry['case'] for entry in data] == list(range(1, 8))
    for entry in data:
        G = matrix(entry['G'])
        assert G == canonical_matrix(entry['case'])
        assert G ** 4 == matrix([[int(i == j) for j in range(4)] for i in range(4)])


def test_output_round_trips(capsys):
    code = main(['canonical'])
    text = capsys.readouterr().out
    assert code == 0
    assert json.dumps(json.loads(text), indent=settings.json_indent,
                      ensure_ascii=False) + '\n' == text


if __name__ == "__main__":
    pytest.main([__file__])
