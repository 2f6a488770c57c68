#!/usr/bin/env python3
"""Frozen-backbone fine-tuning in miniature: train the dense head on synthetic
pooled-embedding clusters and print the per-class evaluation table.

Run from the repo root:  python demos/04_train_style_head.py
"""

import numpy as np

from atelier.metrics import confusion_matrix, macro_average, per_class_metrics
from atelier.train import FeatureTable, Hyperparams, predict, train_head

rng = np.random.default_rng(11)
styles = ["Impressionism", "Baroque", "Ukiyo-e", "Cubism"]
dim, per_class = 64, 120

print("synthesizing pooled embeddings: four style clusters, 6-sigma apart")
xs, ys, parts = [], [], []
for c in range(len(styles)):
    center = np.zeros(dim)
    center[c] = 6.0 / np.sqrt(2)
    xs.append(center + rng.normal(size=(per_class, dim)))
    ys.extend([c] * per_class)
    parts.extend(["train"] * 96 + ["val"] * 24)
table = FeatureTable(ids=[f"work{i}" for i in range(len(parts))],
                     embeddings=np.concatenate(xs).astype(np.float32),
                     class_indices=np.asarray(ys), partitions=parts,
                     class_names=styles)

print("training: SGD + momentum on softmax cross-entropy, backbone untouched")
head = train_head(table, Hyperparams(learning_rate=0.05, max_epochs=25, seed=0))
for stats in head.history[::6]:
    print(f"  epoch {stats.epoch:>2}: train loss {stats.train_loss:.4f}, "
          f"val macro-F1 {stats.val_macro_f1:.4f}")

rows = table.rows("val")
preds = predict(head.weights, head.bias, table.embeddings[rows].astype(np.float64))
report = per_class_metrics(confusion_matrix(preds, table.class_indices[rows],
                                            len(styles), styles))
print("\n  Class            Precision  Recall  F1")
for m in report.per_class:
    print(f"  {m.name:<16} {m.precision:9.2f} {m.recall:7.2f} {m.f1:5.2f}")
macro_p, macro_r, macro_f1 = macro_average(report)
print(f"  macro            {macro_p:9.2f} {macro_r:7.2f} {macro_f1:5.2f}")
