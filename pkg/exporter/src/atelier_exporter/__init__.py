"""atelier-exporter: converts ResNet50V2 checkpoints into `.atlr` archives and
emits reference-activation fixtures for cross-implementation parity testing.

This tool deliberately shares no code with the inference engine it feeds: the
archive writer, the architecture walk and the reference forward pass are all
independent implementations of the same documented contracts.
"""

__version__ = "0.1.0"
