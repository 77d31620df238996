import runpy
from pathlib import Path

BENCH = Path(__file__).resolve().parents[1] / "benchmarks" / "bench_kernels.py"


def test_benchmark_quick_run(capsys):
    mod = runpy.run_path(str(BENCH))
    assert mod["main"](["--quick", "--repeat", "1"]) == 0
    out = capsys.readouterr().out
    assert "count_orthogonal I4 mod 3" in out
