"""gazemap: aggregate token-resolved eye-tracking logs over a codebase into
attention maps, compare reading orders, and export a static viewer bundle.

Submodules: model (domain types), ingest (parsers and classification),
aggregate (LineHits pipeline), sequences (DTW / alignment), overlap
(Jaccard), stats (test battery), export (versioned formats), cli.
"""

__version__ = "0.1.0"
