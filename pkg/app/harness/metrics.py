"""
Micro and Macro F1.
"""
from sklearn.metrics import f1_score
from sklearn.preprocessing import MultiLabelBinarizer


def micro_macro_f1(predictions, truth, classes, multilabel=False):
    """(micro, macro) F1 over aligned per-node predictions.

    Multiclass inputs hold one class per node; multilabel inputs hold a set
    per node. Macro averages over every class of ``classes``, a class with
    no true and no predicted node scoring 0.
    """
    if len(predictions) != len(truth):
        raise ValueError(
            f"{len(predictions)} predictions for {len(truth)} true labels."
        )
    if not len(truth):
        raise ValueError("Nothing to score.")
    classes = list(classes)
    if multilabel:
        binarizer = MultiLabelBinarizer(classes=classes)
        actual = binarizer.fit_transform(truth)
        predicted = binarizer.transform(predictions)
        options = {}
    else:
        actual, predicted = list(truth), list(predictions)
        options = {"labels": classes}

    micro, macro = (
        f1_score(actual, predicted, average=average, zero_division=0, **options)
        for average in ("micro", "macro")
    )
    return float(micro), float(macro)
