"""Model serialization: one zip file per model.

The container holds ``header.json`` ({method, dims, hyperparameters, seed,
train_manifest_hash, ...}) plus one native binary array per parameter.
Zip entries carry a fixed timestamp so identical models serialize to
identical bytes.
"""

import hashlib
import json
import zipfile

import numpy as np

from .arrayio import array_to_bytes, bytes_to_array
from .errors import DataError
from . import __version__
from .models import (
    DAP,
    DEM,
    ESZSL,
    SAE,
    AttributeDecoder,
    DecoderAugmentedClassifier,
    SoftmaxClassifier,
)

_FIXED_DATE = (1980, 1, 1, 0, 0, 0)


def manifest_hash(path):
    """Stable identifier of the training data: sha256 of the manifest bytes."""
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        digest.update(fh.read())
    return digest.hexdigest()


def _row(v):
    return np.asarray(v).reshape(1, -1)


def _col(v):
    return np.asarray(v).reshape(-1, 1)


def _collect_arrays(model):
    if isinstance(model, ESZSL):
        return {"V": model.V_, "classes": _col(model.classes_)}
    if isinstance(model, SAE):
        return {"W": model.W_}
    if isinstance(model, DAP):
        return {
            "coef": model.coef_,
            "intercept": _row(model.intercept_),
            "thresholds": _row(model.thresholds_),
            "priors": _row(model.priors_),
            "excluded": _col(model.excluded_.astype(np.int64)),
            "classes": _col(model.classes_),
        }
    if isinstance(model, DEM):
        p = model.params_
        return {"W1": p["W1"], "b1": _row(p["b1"]), "W2": p["W2"], "b2": _row(p["b2"])}
    if isinstance(model, SoftmaxClassifier):
        return {"W": model.W_, "b": _row(model.b_), "classes": _col(model.classes_)}
    if isinstance(model, DecoderAugmentedClassifier):
        arrays = {f"clf_{k}": v for k, v in _collect_arrays(model.classifier).items()}
        p = model.decoder.params_
        arrays.update({"dec_W1": p["W1"], "dec_b1": _row(p["b1"]),
                       "dec_W2": p["W2"], "dec_b2": _row(p["b2"])})
        return arrays
    raise DataError(f"cannot serialize model of type {type(model).__name__}")


def _header_params(model):
    if isinstance(model, DecoderAugmentedClassifier):
        return {"classifier": model.classifier.get_params(),
                "decoder": model.decoder.get_params()}
    return model.get_params()


def save_model(model, path, train_manifest_hash="", extra=None):
    """Serialize a fitted model; ``extra`` merges into the JSON header."""
    arrays = _collect_arrays(model)
    header = {
        "method": model.method,
        "toolkit_version": __version__,
        "hyperparameters": _header_params(model),
        "seed": getattr(model, "seed", None),
        "train_manifest_hash": train_manifest_hash,
        "dims": {name: list(arr.shape) for name, arr in
                 ((n, np.atleast_2d(a)) for n, a in arrays.items())},
        "arrays": sorted(arrays),
    }
    if extra:
        header.update(extra)
    with zipfile.ZipFile(path, "w", compression=zipfile.ZIP_DEFLATED) as zf:
        info = zipfile.ZipInfo("header.json", date_time=_FIXED_DATE)
        zf.writestr(info, json.dumps(header, sort_keys=True, indent=2))
        for name in sorted(arrays):
            info = zipfile.ZipInfo(f"{name}.zspl", date_time=_FIXED_DATE)
            zf.writestr(info, array_to_bytes(arrays[name], where=name))


def _restore_dap(params, arrays):
    model = DAP(**params)
    model.coef_ = arrays["coef"]
    model.intercept_ = arrays["intercept"][0]
    model.thresholds_ = arrays["thresholds"][0]
    model.priors_ = arrays["priors"][0]
    model.excluded_ = arrays["excluded"][:, 0]
    model.classes_ = arrays["classes"][:, 0]
    return model


def load_model(path):
    """Reconstruct a fitted model from its container; returns (model, header)."""
    try:
        with zipfile.ZipFile(path, "r") as zf:
            header = json.loads(zf.read("header.json"))
            arrays = {name: bytes_to_array(zf.read(f"{name}.zspl"), path=name)
                      for name in header["arrays"]}
    except (OSError, zipfile.BadZipFile, KeyError) as exc:
        raise DataError(f"cannot load model file {path}: {exc}") from exc

    method = header.get("method")
    params = header.get("hyperparameters", {})
    if method == "eszsl":
        model = ESZSL(**params)
        model.V_ = arrays["V"]
        model.classes_ = arrays["classes"][:, 0]
    elif method == "sae":
        model = SAE(**params)
        model.W_ = arrays["W"]
        model.residual_ = header.get("residual")
    elif method == "dap":
        model = _restore_dap(params, arrays)
    elif method == "dem":
        model = DEM(**params)
        model.params_ = {"W1": arrays["W1"], "b1": arrays["b1"][0],
                         "W2": arrays["W2"], "b2": arrays["b2"][0]}
        model.loss_history_ = header.get("loss_history", [])
    elif method == "gen-softmax":
        model = SoftmaxClassifier(**params)
        model.W_ = arrays["W"]
        model.b_ = arrays["b"][0]
        model.classes_ = arrays["classes"][:, 0]
    elif method == "gen-decoder":
        clf = SoftmaxClassifier(**params.get("classifier", {}))
        clf.W_ = arrays["clf_W"]
        clf.b_ = arrays["clf_b"][0]
        clf.classes_ = arrays["clf_classes"][:, 0]
        dec = AttributeDecoder(**params.get("decoder", {}))
        dec.params_ = {"W1": arrays["dec_W1"], "b1": arrays["dec_b1"][0],
                       "W2": arrays["dec_W2"], "b2": arrays["dec_b2"][0]}
        model = DecoderAugmentedClassifier(classifier=clf, decoder=dec)
    else:
        raise DataError(f"model file {path} has unknown method {method!r}")
    return model, header
