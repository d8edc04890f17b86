"""treehom: homomorphisms from {<,inc}-constraint graphs into tree-like
orders, universal-order embeddings, and a set-and-bound pebble game with a
compositional duplicator engine."""

__version__ = "0.1.0"
