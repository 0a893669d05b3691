import numpy as np
import pytest

from ellipticsde import FbmConfig, GridFunction, lacunary_path, sample_fbm


@pytest.fixture(scope="session")
def path_corpus():
    """Mixed corpus of grid paths on n=256: polynomials, trig, lacunary, fBm."""
    n = 256
    t = np.linspace(0, 1, n + 1)
    paths = {
        "t": t,
        "t^2": t**2,
        "t^3": t**3,
        "1-t": 1 - t,
        "t(1-t)": t * (1 - t),
        "sqrt": np.sqrt(t),
        "sin1": np.sin(2 * np.pi * t),
        "sin2": np.sin(4 * np.pi * t),
        "cos1": np.cos(2 * np.pi * t) - 1,
        "lac0.6": lacunary_path(n, 0.6, phase_seed=7).values,
        "lac0.75": lacunary_path(n, 0.75, phase_seed=8).values,
        "lac0.9": lacunary_path(n, 0.9, phase_seed=9).values,
    }
    for stream in range(8):
        for hurst in (0.6, 0.75, 0.9):
            key = f"fbm{hurst}/{stream}"
            paths[key] = sample_fbm(FbmConfig(hurst=hurst, n=n, seed=42), stream=stream).values
            if len(paths) >= 28:
                break
        if len(paths) >= 28:
            break
    return {name: GridFunction(n, v) for name, v in paths.items()}
