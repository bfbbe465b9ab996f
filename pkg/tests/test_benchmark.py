import subprocess
import sys
from pathlib import Path

SCRIPT = Path(__file__).parents[1] / "benchmarks" / "bench_kernels.py"


def test_benchmark_runs_and_backends_agree():
    proc = subprocess.run(
        [sys.executable, str(SCRIPT), "--parts", "2,2", "--matching-n", "3", "--repeat", "1"],
        capture_output=True, text=True, check=True,
    )
    lines = proc.stdout.splitlines()
    assert lines[0].startswith("composition 2,2")
    assert {ln.split()[0] for ln in lines[2:]} == {
        "perm_stats", "matching_stats", "marked_bdiff", "marked_stats",
        "convertible_all", "phi_batch", "prop41_ok",
    }
