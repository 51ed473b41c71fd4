#!/usr/bin/env python3
"""
Prometheus metrics for stringy invariant computations

Commands record how often each computation ran, how long it took and how
many verification checks passed or failed. The registry can be written to a
node-exporter textfile after a run.
"""

import logging
import time
from contextlib import contextmanager

from prometheus_client import CollectorRegistry, Counter, Gauge, Histogram, generate_latest, write_to_textfile

logger = logging.getLogger(__name__)

registry = CollectorRegistry()

computations_total = Counter('stringy_computations_total', 'Computations run, by command',
                             ['command'], registry=registry)
computation_errors = Counter('stringy_computation_errors_total', 'Computations that raised, by error',
                             ['command', 'error'], registry=registry)
computation_seconds = Histogram('stringy_computation_duration_seconds', 'Computation wall time in seconds',
                                ['command'], registry=registry)
checks_total = Counter('stringy_checks_total', 'Verification checks, by outcome',
                       ['check', 'outcome'], registry=registry)
q_order = Gauge('stringy_q_order', 'q-order of the last elliptic computation', registry=registry)

# Process start time for uptime calculation
start_time = time.time()
uptime = Gauge('stringy_uptime_seconds', 'Seconds since the tools were loaded', registry=registry)


@contextmanager
def track(command: str):
    """Count and time one computation; exceptions are counted and re-raised"""
    computations_total.labels(command=command).inc()
    started = time.perf_counter()
    try:
        yield
    except Exception as e:
        computation_errors.labels(command=command, error=type(e).__name__).inc()
        raise
    finally:
        computation_seconds.labels(command=command).observe(time.perf_counter() - started)


def record_check(check: str, passed: bool):
    checks_total.labels(check=check, outcome='pass' if passed else 'fail').inc()


def check_count(check: str, outcome: str) -> float:
    value = registry.get_sample_value('stringy_checks_total', {'check': check, 'outcome': outcome})
    return value or 0.0


def metrics_text() -> bytes:
    uptime.set(time.time() - start_time)
    return generate_latest(registry)


def export(path: str):
    """Write the registry in the textfile-collector format"""
    uptime.set(time.time() - start_time)
    try:
        write_to_textfile(path, registry)
    except OSError as e:
        logger.error(f"Error writing metrics to {path}: {e}")


__all__ = ['track', 'record_check', 'check_count', 'metrics_text', 'export', 'q_order']
