import csv
import io
import math

import pytest

from resonant_ratchet.__main__ import main
from resonant_ratchet.config import RunConfig
from resonant_ratchet.propagator import ResonanceOrder
from resonant_ratchet.recipes import (EVOLVE_COLUMNS, FIGURES, SWEEP_COLUMNS, cmd_evolve,
                                      cmd_fig, cmd_gamma, cmd_periods, cmd_sweep, cmd_verify,
                                      figure_config, sweep_row)
from resonant_ratchet.state import TailMassError


def read_table(text):
    """
    Preamble comments and the CSV rows (header first) of a command output.
    """
    lines = text.splitlines()
    comments = [line for line in lines if line.startswith('#')]
    rows = list(csv.reader(line for line in lines if not line.startswith('#')))
    return comments, rows


def test_gamma_table_output():
    stream = io.StringIO()
    cmd_gamma(ResonanceOrder(1, 3), stream)
    comments, rows = read_table(stream.getvalue())
    assert comments[:2] == ['# r = 1', '# q = 3']
    assert rows[0] == ['n', 're_gamma', 'im_gamma', 'abs_gamma']
    assert [row[0] for row in rows[1:]] == ['0', '1', '2']
    for row in rows[1:]:
        assert float(row[3]) == pytest.approx(math.sqrt(3), abs=1e-14)
    assert float(rows[1][2]) == pytest.approx(-math.sqrt(3), abs=1e-14)
    assert any(line.startswith('# residual sum = ') for line in comments)


def test_evolve_output():
    stream = io.StringIO()
    trajectory = cmd_evolve(RunConfig(k=1.0, n_kicks=5), stream)
    comments, rows = read_table(stream.getvalue())
    assert '# k = 1.0' in comments
    assert tuple(rows[0]) == EVOLVE_COLUMNS
    assert [row[0] for row in rows[1:]] == ['0', '1', '2', '3', '4', '5']
    # no force is defined before the first kick
    assert rows[1][3] == ''
    assert len(trajectory) == 6
    for row in rows[1:]:
        assert abs(float(row[1])) <= 1e-10
        assert float(row[4]) == pytest.approx(1, abs=1e-12)


def test_evolve_plane_wave_is_preserved():
    stream = io.StringIO()
    cmd_evolve(RunConfig(k=4.0, n_kicks=10, initial='plane:3'), stream)
    _, rows = read_table(stream.getvalue())
    for row in rows[1:]:
        assert float(row[1]) == pytest.approx(3, abs=1e-9)


def test_evolve_writes_rows_before_tail_abort():
    stream = io.StringIO()
    with pytest.raises(TailMassError):
        cmd_evolve(RunConfig(k=5.0, n_kicks=50, m_max=16), stream)
    _, rows = read_table(stream.getvalue())
    assert len(rows) >= 3
    assert rows[1][0] == '0'


def test_sweep_row_columns():
    config = RunConfig(k_min=0.5, k_max=1.0, k_steps=2, a=0.01, alpha=math.pi / 3, n_kicks=5)
    row = sweep_row(config, 0.5)
    assert len(row) == len(SWEEP_COLUMNS)
    k, numeric, band, perturbative, analytic, asymptotic, regime = row
    assert k == 0.5
    assert regime == 'perturbative'
    assert analytic is not None
    assert perturbative is not None
    assert asymptotic is None

    config = config.replace(q=5, a=2.0)
    _, _, _, perturbative, analytic, asymptotic, regime = sweep_row(config, 0.5)
    assert regime == 'out_of_regime'
    assert perturbative is None and analytic is None and asymptotic is None


def test_sweep_is_independent_of_workers():
    config = RunConfig(k_min=0.5, k_max=1.5, k_steps=3, a=0.01, alpha=math.pi / 3, n_kicks=5)
    serial, parallel = io.StringIO(), io.StringIO()
    cmd_sweep(config, serial, jobs=1)
    cmd_sweep(config, parallel, jobs=2)
    assert serial.getvalue() == parallel.getvalue()
    _, rows = read_table(serial.getvalue())
    assert tuple(rows[0]) == SWEEP_COLUMNS
    assert len(rows) == 4


def test_periods_output():
    stream = io.StringIO()
    cmd_periods(RunConfig(k=1.0, a=0.01, alpha=math.pi / 3), stream, q_max=3)
    comments, rows = read_table(stream.getvalue())
    assert '# q_max = 3' in comments
    assert rows[0] == ['r', 'q', 'f_band']
    assert [tuple(row[:2]) for row in rows[1:]] == [('1', '1'), ('1', '2'), ('1', '3'),
                                                     ('2', '3')]


def test_figure_configs():
    assert set(FIGURES) == {'1', '1-inset', '2a', '2b', '3', 'ratio'}
    kind, config = figure_config('2a')
    assert kind == 'sweep'
    assert (config.q, config.a, config.k_steps, config.n_kicks) == (3, 0.01, 100, 100)
    assert config.alpha == pytest.approx(math.pi / 3)
    assert figure_config('2b', n_kicks=7)[1].n_kicks == 7
    assert figure_config('3')[1].initial == 'expr:cos_cos_sin2'
    with pytest.raises(ValueError):
        figure_config('4')


def test_figure_output_is_deterministic():
    first, second = io.StringIO(), io.StringIO()
    cmd_fig('1-inset', first, n_kicks=5)
    cmd_fig('1-inset', second, n_kicks=5)
    assert first.getvalue() == second.getvalue()
    _, rows = read_table(first.getvalue())
    assert len(rows) == 7


def test_ratio_figure():
    stream = io.StringIO()
    cmd_fig('ratio', stream, n_kicks=5)
    _, rows = read_table(stream.getvalue())
    assert rows[0] == ['N', 'p_mean', 'p_variance', 'ratio']
    assert [row[0] for row in rows[1:]] == ['1', '2', '3', '4', '5']
    for row in rows[1:]:
        assert float(row[2]) > 0


def test_verify_gamma(capsys):
    assert cmd_verify('gamma', colors=False) == 0
    out = capsys.readouterr().out
    assert 'GAMMA' in out
    assert 'failed' not in out


def test_main_gamma(tmp_path):
    path = tmp_path / 'gamma.csv'
    assert main(['gamma', '1', '5', '--out', str(path)]) == 0
    _, rows = read_table(path.read_text())
    assert len(rows) == 6


def test_main_exit_codes(tmp_path, capsys):
    assert main(['gamma', '2', '4']) == 1
    assert main(['evolve', '--config', str(tmp_path / 'missing.cfg')]) == 1

    config = tmp_path / 'bad.cfg'
    config.write_text('k = 1\nalpha = pi/x\n')
    assert main(['evolve', '--config', str(config)]) == 1
    assert 'bad.cfg:2: alpha' in capsys.readouterr().err

    config = tmp_path / 'small.cfg'
    config.write_text('k = 5\nm_max = 16\nn_kicks = 50\n')
    assert main(['evolve', '--config', str(config), '--out', str(tmp_path / 'out.csv')]) == 2
    assert 'numerical failure' in capsys.readouterr().err


def test_main_n_kicks_override(tmp_path):
    config = tmp_path / 'run.cfg'
    config.write_text('k = 1\nn_kicks = 100\n')
    out = tmp_path / 'out.csv'
    assert main(['evolve', '-c', str(config), '-n', '3', '-o', str(out)]) == 0
    comments, rows = read_table(out.read_text())
    assert '# n_kicks = 3' in comments
    assert len(rows) == 5


def test_main_rejects_bad_arguments():
    with pytest.raises(SystemExit):
        main(['fig', '9'])
    with pytest.raises(SystemExit):
        main(['verify', 'everything'])


def test_main_config_errors_leave_output_untouched(tmp_path, capsys):
    out = tmp_path / 'out.csv'
    out.write_text('previous run\n')
    config = tmp_path / 'div.cfg'
    config.write_text('k = 1\nalpha = pi/0\n')
    assert main(['evolve', '-c', str(config), '-o', str(out)]) == 1
    assert 'div.cfg:2: alpha' in capsys.readouterr().err
    assert out.read_text() == 'previous run\n'

    fresh = tmp_path / 'fresh.csv'
    assert main(['sweep', '-c', str(tmp_path / 'missing.cfg'), '-o', str(fresh)]) == 1
    assert main(['gamma', '2', '4', '-o', str(fresh)]) == 1
    assert not fresh.exists()


def test_main_evolves_distant_plane_wave(tmp_path):
    config = tmp_path / 'plane.cfg'
    config.write_text('k = 1\nn_kicks = 2\ninitial = plane:81\n')
    out = tmp_path / 'out.csv'
    assert main(['evolve', '-c', str(config), '-o', str(out)]) == 0
    _, rows = read_table(out.read_text())
    assert [float(row[1]) for row in rows[1:]] == pytest.approx([81, 81, 81], abs=1e-9)
