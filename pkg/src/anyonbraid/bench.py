"""Wall-clock benchmark: cold ground-state synthesis plus one Ramsey run on an LxL patch."""

from __future__ import annotations

import time

from .errors import InvalidLatticeError
from .lattice import square_lattice
from .protocols import engines
from .protocols.braiding import ramsey_experiment


def clear_caches() -> None:
    engines.ground_state_circuit.cache_clear()
    engines._tableau_ground_state.cache_clear()


def benchmark(size: int, seed: int = 0) -> dict:
    """Timings in seconds. The braid is the star of a central vertex, enclosing the e-edge."""
    if size < 2:
        raise InvalidLatticeError(f"benchmark size must be >= 2, got {size}")
    clear_caches()
    t0 = time.perf_counter()
    code = square_lattice(size, size, "planar")
    t1 = time.perf_counter()
    circuit = engines.ground_state_circuit(code)
    t2 = time.perf_counter()
    engines._tableau_ground_state(code)
    t3 = time.perf_counter()
    centre = (size // 2) * size + size // 2 + 1
    loop = code.star(centre)
    report = ramsey_experiment(code, loop[0], loop[-1], loop, seed=seed)
    t4 = time.perf_counter()
    return {
        "size": size,
        "n_qubits": code.n_edges,
        "gates": len(circuit.ops),
        "seed": seed,
        "braiding_phase": report.braiding_phase,
        "seconds": {
            "build_code": t1 - t0,
            "synthesis": t2 - t1,
            "preparation": t3 - t2,
            "ramsey": t4 - t3,
            "total": t4 - t0,
        },
    }
