"""Monte-Carlo bit error rates of the three detectors.

Each trial draws a Gaussian channel, uniform BPSK symbols and noise of
variance N 10^(-SNR/10), then runs exhaustive ML, linear MMSE and the QAOA
detector on the same received vector. At two symbols the QAOA detector
should track exhaustive ML, and both should beat MMSE as the SNR grows.

Usage: ``python demos/ber_study.py [trials_per_snr]`` (default 1000). The
command-line equivalent is ``qaoa-mld ber --n 2 --snr 0:10:2 --trials 1000``.
"""
import sys

from qaoa_mld import DetectorKind, TrialConfig, run_ber
from qaoa_mld.detect import wilson_interval

trials = int(sys.argv[1]) if len(sys.argv) > 1 else 1000
config = TrialConfig(system_size=2, snr_db_list=range(0, 11, 2), trials_per_snr=trials,
                     master_seed=42)
report = run_ber(config)
print(report.to_csv())

print("SNR   CML 95% interval        QML inside?")
for row in report.rows:
    lo, hi = wilson_interval(row.errors[DetectorKind.CML], row.bits)
    inside = lo <= row.ber(DetectorKind.QML) <= hi
    print(f"{row.snr_db:4.0f}  [{lo:.4f}, {hi:.4f}]    {inside}")

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    pass
else:
    snr = [r.snr_db for r in report.rows]
    fig, ax = plt.subplots(figsize=(5, 4))
    for kind, marker in [("cml", "o"), ("mmse", "s"), ("qml", "x")]:
        ax.semilogy(snr, report.ber(kind), marker=marker, label=kind.upper())
    ax.set_xlabel("SNR (dB)")
    ax.set_ylabel("BER")
    ax.legend()
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    fig.savefig("ber.png", dpi=120)
    print("wrote ber.png")
