"""Serialisation of fold results and cross-validation summaries."""
from __future__ import annotations

import pandas as pd
from marshmallow import Schema, fields

from tsf.model_train.cross_validation import CvReport
from tsf.model_train.trainer import FoldResult


class ClassScoreSchema(Schema):
    label = fields.Int()
    precision = fields.Float()
    recall = fields.Float()
    f1 = fields.Float()
    support = fields.Int()


class EpochSchema(Schema):
    epoch = fields.Int()
    loss = fields.Float()
    train_accuracy = fields.Float()
    val_accuracy = fields.Float()
    lr = fields.Float()
    tau = fields.Float()


class FoldReportSchema(Schema):
    fold_id = fields.Str()
    run = fields.Int()
    macro_f1 = fields.Float()
    weighted_f1 = fields.Float()
    accuracy = fields.Float()
    flops = fields.Float()
    runtime_s = fields.Float()
    best_epoch = fields.Int()
    test_subjects = fields.List(fields.Int())
    per_class = fields.List(fields.Nested(ClassScoreSchema))
    curve = fields.List(fields.Nested(EpochSchema))


class CvSummarySchema(Schema):
    protocol = fields.Str()
    runs = fields.Int()
    folds = fields.Int()
    run_macro_f1 = fields.List(fields.Float())
    run_weighted_f1 = fields.List(fields.Float())
    macro_f1_mean = fields.Float()
    macro_f1_std = fields.Float()
    weighted_f1_mean = fields.Float()
    weighted_f1_std = fields.Float()


def fold_record(result: FoldResult, run: int = 0) -> dict:
    scores = result.scores
    per_class = [
        {"label": int(label), "precision": float(p), "recall": float(r), "f1": float(f), "support": int(s)}
        for label, p, r, f, s in zip(scores.labels, scores.precision, scores.recall, scores.f1, scores.support)
    ]
    return FoldReportSchema().dump({
        "fold_id": result.fold_id,
        "run": run,
        "macro_f1": scores.macro_f1,
        "weighted_f1": scores.weighted_f1,
        "accuracy": scores.accuracy,
        "flops": result.flops,
        "runtime_s": result.runtime_s,
        "best_epoch": result.best_epoch,
        "test_subjects": result.test_subjects,
        "per_class": per_class,
        "curve": result.curve,
    })


def confusion_frame(result: FoldResult) -> pd.DataFrame:
    labels = [int(c) for c in result.scores.confusion_labels]
    frame = pd.DataFrame(result.scores.confusion, index=labels, columns=labels)
    frame.index.name = "true\\predicted"
    return frame


def cv_summary(report: CvReport) -> dict:
    return CvSummarySchema().dump({
        "protocol": report.protocol,
        "runs": len(report.runs),
        "folds": len(report.runs[0]) if report.runs else 0,
        "run_macro_f1": report.run_macro_f1,
        "run_weighted_f1": report.run_weighted_f1,
        **report.summary(),
    })
