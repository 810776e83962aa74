"""Feature-extraction and dataset-conversion companion to the zspeedl toolkit.

Produces only the toolkit's documented file formats (binary arrays, split
and manifest JSON, timing-report JSON); the toolkit itself is consumed
solely through those formats and its CLI.
"""

__version__ = "0.1.0"
