"""Freeze reference metric values computed with numpy/scipy."""
import json
import pathlib

import numpy as np
from scipy import stats

OUT = pathlib.Path(__file__).resolve().parents[1] / "data" / "metrics_oracle.json"


def ci(p, y):
    num = 0.0
    z = 0
    for i in range(len(y)):
        for j in range(len(y)):
            if y[i] > y[j]:
                z += 1
                d = p[i] - p[j]
                num += 1.0 if d > 0 else (0.5 if d == 0 else 0.0)
    return num / z


def rm2(p, y):
    r2 = stats.pearsonr(p, y)[0] ** 2
    r02 = np.dot(p, y) ** 2 / (np.dot(p, p) * np.dot(y, y))
    return r2 * (1 - np.sqrt(abs(r2 - r02)))


def case(name, p, y):
    p = np.asarray(p, dtype=float)
    y = np.asarray(y, dtype=float)
    return {
        "name": name,
        "p": p.tolist(),
        "y": y.tolist(),
        "mse": float(np.mean((p - y) ** 2)),
        "ci": ci(p, y),
        "pearson": float(stats.pearsonr(p, y)[0]),
        "spearman": float(stats.spearmanr(p, y)[0]),
        "rm2": float(rm2(p, y)),
    }


def main():
    rng = np.random.default_rng(2024)
    cases = [case("hand", [1, 3, 2], [1, 2, 3]), case("scaled", [2, 4, 6], [1, 2, 3])]
    y = rng.normal(11.5, 0.8, 60)
    cases.append(case("noisy", y + rng.normal(0, 0.4, 60), y))
    yt = np.round(rng.uniform(10, 14, 80), 1)
    cases.append(case("ties", np.round(yt + rng.normal(0, 0.5, 80), 1), yt))
    cases.append(case("anti", -rng.uniform(0, 1, 40), rng.uniform(0, 1, 40)))
    OUT.write_text(json.dumps(cases, indent=1) + "\n")


if __name__ == "__main__":
    main()
