"""Control-flow based error-resilience analysis at desk scale.

The pipeline: run toy programs under single-bit-flip fault injection,
record execution traces, build per-function loop-sensitive graphs,
diff faulty runs against the golden run, accumulate campaign-wide
criticality graphs, and serve the results to an interactive explorer.
"""

__version__ = "0.1.0"
