import csv
import io
import json
import math

import pytest

from specsampler.__main__ import main


def read_csv(text: str) -> list[dict]:
    return list(csv.DictReader(io.StringIO(text)))


@pytest.fixture
def run(capsys):
    def invoke(*argv: str) -> tuple[int, str, str]:
        code = main(list(argv))
        captured = capsys.readouterr()
        return code, captured.out, captured.err

    return invoke


# Test the points command
def test_points_free_pair(run):
    code, out, _ = run('points', '--model', 'free2')
    rows = read_csv(out)
    assert code == 0
    assert [row['index'] for row in rows] == ['0', '1']
    assert [float(row['x']) for row in rows] == pytest.approx([-1.0, 1.0], abs=1e-14)
    assert [float(row['kernel_norm']) for row in rows] == pytest.approx([2.0, 2.0])
    assert [float(row['weight']) for row in rows] == pytest.approx([0.5, 0.5])


def test_points_interval_lattice(run):
    code, out, _ = run('points', '--model', 'pw_2pi', '--theta', '0', '--window', '1')
    assert code == 0
    assert [float(row['x']) for row in read_csv(out)] == pytest.approx([-1.0, 0.0, 1.0], abs=1e-15)


def test_points_is_deterministic(run):
    first = run('points', '--model', 'power2', '--tau', '0.7')
    second = run('points', '--model', 'power2', '--tau', '0.7')
    assert first[0] == 0
    assert first[1] == second[1]


def test_points_writes_output_file(run, tmp_path):
    path = tmp_path / 'points.csv'
    code, out, _ = run('points', '--model', 'free2', '--out', str(path))
    assert code == 0
    assert out == ''
    assert len(read_csv(path.read_text())) == 2


# Test the place command
def test_place(run):
    code, out, _ = run('place', '--model', 'free2', '--x-star', '0.5')
    result = json.loads(out)
    assert code == 0
    assert 0 <= result['tau'] < math.pi
    assert min(abs(x - 0.5) for x in result['points']) < 1e-8


# Test the reconstruct command
def test_reconstruct_from_written_points(run, tmp_path):
    points = tmp_path / 'points.csv'
    state = tmp_path / 'state.json'
    state.write_text(json.dumps({'coeffs': [0.3, [0.0, 1.0]]}))
    assert run('points', '--model', 'free2', '--tau', '1.1', '--out', str(points))[0] == 0

    code, out, _ = run('reconstruct', '--model', 'free2', '--state', str(state), '--points', str(points),
                       '--grid=-2:2:5,0.5')
    rows = read_csv(out)
    assert code == 0
    assert len(rows) == 5
    assert max(float(row['err_kernel']) for row in rows) < 1e-9
    assert max(float(row['err_lagrange']) for row in rows) < 1e-9
    assert float(rows[2]['f_true_re']) == pytest.approx(-0.2)
    assert float(rows[2]['f_true_im']) == pytest.approx(0.0, abs=1e-15)


def test_reconstruct_rejects_foreign_state(run, tmp_path):
    state = tmp_path / 'state.json'
    state.write_text(json.dumps({'coeffs': [1.0, 0.0, 0.0]}))
    code, _, err = run('reconstruct', '--model', 'free2', '--state', str(state), '--grid', '0:1:2')
    assert code == 2
    assert 'ContractViolationException' in err


# Test the sweep, diagnose and structure commands
def test_sweep(run):
    code, out, _ = run('sweep', '--model', 'free2', '--count', '4')
    rows = read_csv(out)
    assert code == 0
    # the decoupled extension of a two-dimensional model has a single point
    assert len(rows) == 7
    assert len({row['extension'] for row in rows}) == 4


def test_diagnose_power_six(run):
    code, out, _ = run('diagnose', '--model', 'power6')
    assert code == 0
    assert json.loads(out)['converged'] is True


def test_diagnose_needs_a_jacobi_model(run):
    assert run('diagnose', '--model', 'pw_unit')[0] == 2


def test_structure_free_pair(run):
    code, out, _ = run('structure', '--model', 'free2', '--grid', '0:1:3')
    rows = read_csv(out)
    assert code == 0
    # e(z) = -sqrt(pi / 2) (z + i)^2
    assert float(rows[0]['e_re']) == pytest.approx(math.sqrt(math.pi / 2))
    assert float(rows[2]['b_re']) == pytest.approx(-2 * math.sqrt(math.pi / 2))
    assert float(rows[2]['s_re']) == pytest.approx(float(rows[2]['b_re']))


def test_structure_rejects_real_anchor(run):
    assert run('structure', '--model', 'free2', '--grid', '0:1:3', '--z', '0.5')[0] == 2


def test_grid_with_a_negative_lower_bound(run):
    joined = run('structure', '--model', 'free2', '--grid=-1:1:3')
    separate = run('structure', '--model', 'free2', '--grid', '-1:1:3')
    assert joined[0] == separate[0] == 0
    assert joined[1] == separate[1]
    rows = read_csv(joined[1])
    assert float(rows[0]['z_re']) == pytest.approx(-1.0)
    # e(-1) = -sqrt(pi / 2) (-1 + i)^2 = 2i sqrt(pi / 2)
    assert float(rows[0]['e_im']) == pytest.approx(2 * math.sqrt(math.pi / 2))


def test_anchor_in_the_lower_half_plane(run):
    separate = run('structure', '--model', 'free2', '--grid', '0:1:3', '--z', '-1j')
    assert separate[0] == 0
    assert separate[1] == run('structure', '--model', 'free2', '--grid', '0:1:3', '--z=-1j')[1]


def test_points_with_overflowing_kernel_norms(run):
    code, _, err = run('points', '--model', 'free', '--n', '24', '--tau', repr(math.pi / 2 - 1e-13))
    assert code == 2
    assert 'ContractViolationException' in err


# Test exit codes for bad inputs
def test_corrupted_coefficient_file(run, tmp_path):
    model = tmp_path / 'model.json'
    model.write_text(json.dumps({'b': [1.0, 0.0], 'q': [0.0, 0.0]}))
    code, out, err = run('points', '--model', str(model))
    assert code == 2
    assert out == ''
    assert len(err.strip().splitlines()) == 1


@pytest.mark.parametrize('argv', [
    ('transmogrify',),
    ('points',),
    ('points', '--model', 'free2', '--tau', '0.1', '--theta', '0.1'),
    ('points', '--model', 'free2', '--tau', '4'),
    ('reconstruct', '--model', 'free2', '--state', 'state.json'),
    ('structure', '--model', 'free2', '--grid', '0:1:0'),
    ('points', '--model', 'no-such-model'),
])
def test_input_errors(run, argv):
    assert run(*argv)[0] == 2


# Test the verify command
def test_verify_passes_with_defaults(run):
    code, _, _ = run('verify')
    assert code == 0


def test_verify_fails_under_an_impossible_tolerance(run):
    code, _, _ = run('verify', '--model', 'free2', '--tol', '1e-16')
    assert code == 1
