#!/usr/bin/env python3
"""The retrieval loop behind the search UI: embed a small gallery, query with
one work, then hop to the nearest neighbor and query again.

Run from the repo root:  python demos/05_similarity_search.py
"""

import numpy as np

from _common import STYLE_NAMES, demo_archive

from atelier import resnet
from atelier.data import AugmentPolicy, augment, preprocess
from atelier.index import build_index, search
from atelier.train import FeatureTable

rng = np.random.default_rng(21)
model = resnet.build_model(19, demo_archive())

print("building a 12-work gallery: 3 originals x 4 augmented variants each")
ids, vectors, classes = [], [], []
for base_idx in range(3):
    base = rng.integers(0, 256, size=(96, 96, 3), dtype=np.uint8)
    variants = augment(base, AugmentPolicy(rng_seed=base_idx, variants_per_image=4),
                       image_seed=base_idx)
    for v, img in enumerate(variants):
        x = preprocess(img)
        pooled = resnet.forward(model, x[None], taps=("pooled",)).taps["pooled"][0]
        ids.append(f"work{base_idx}_v{v}")
        vectors.append(pooled)
        classes.append(base_idx)

table = FeatureTable(ids=ids, embeddings=np.asarray(vectors),
                     class_indices=np.asarray(classes),
                     partitions=["train"] * len(ids),
                     class_names=STYLE_NAMES[:3])
index = build_index(table)
print(f"index: {len(index)} unit vectors, tap = {index.tap!r}")

query_id = "work1_v0"
print(f"\nquery: {query_id} (cosine similarity over pooled embeddings)")
row = index.row_of(query_id)
hits = search(index, index.vectors[row], k=5)
for rank, (hit_id, sim) in enumerate(hits, 1):
    marker = "  <- self" if hit_id == query_id else ""
    print(f"  {rank}. {hit_id:<12} {sim:.4f}{marker}")

print("\nexploration hop: click result 2, re-query with it")
next_id = hits[1][0]
hits2 = search(index, index.vectors[index.row_of(next_id)], k=5)
for rank, (hit_id, sim) in enumerate(hits2, 1):
    print(f"  {rank}. {hit_id:<12} {sim:.4f}")
same_family = sum(h[0].split('_')[0] == next_id.split('_')[0] for h in hits2[:4])
print(f"\n{same_family}/4 top hits share the source work: augmented variants "
      "stay close in embedding space.")
