"""Backbone registry: pretrained CNNs exposing their top-layer pooling units.

Each entry declares the canonical input size, the pooled feature dimension
and the matching preprocessing function. TensorFlow is imported lazily so
the conversion path works without it.
"""

from dataclasses import dataclass


@dataclass(frozen=True)
class BackboneSpec:
    tag: str
    model_name: str          # attribute under tf.keras.applications
    module_name: str         # preprocessing module under the same namespace
    input_size: int
    feature_dim: int


_SPECS = [
    BackboneSpec("mobilenet", "MobileNet", "mobilenet", 224, 1024),
    BackboneSpec("mobilenetv2", "MobileNetV2", "mobilenet_v2", 224, 1280),
    BackboneSpec("inceptionv3", "InceptionV3", "inception_v3", 299, 2048),
    BackboneSpec("resnet50", "ResNet50", "resnet50", 224, 2048),
    BackboneSpec("resnet50v2", "ResNet50V2", "resnet_v2", 224, 2048),
    BackboneSpec("resnet101", "ResNet101", "resnet", 224, 2048),
    BackboneSpec("resnet101v2", "ResNet101V2", "resnet_v2", 224, 2048),
    BackboneSpec("nasnetmobile", "NASNetMobile", "nasnet", 224, 1056),
    BackboneSpec("nasnetlarge", "NASNetLarge", "nasnet", 331, 4032),
    BackboneSpec("densenet201", "DenseNet201", "densenet", 224, 1920),
    BackboneSpec("vgg16", "VGG16", "vgg16", 224, 512),
    BackboneSpec("vgg19", "VGG19", "vgg19", 224, 512),
    BackboneSpec("xception", "Xception", "xception", 299, 2048),
    BackboneSpec("efficientnetb7", "EfficientNetB7", "efficientnet", 600, 2560),
]

BACKBONES = {spec.tag: spec for spec in _SPECS}


def get_spec(tag):
    try:
        return BACKBONES[tag]
    except KeyError:
        raise ValueError(
            f"unknown backbone {tag!r}; supported: {sorted(BACKBONES)}") from None


def build(tag, weights="imagenet"):
    """Instantiate the pooled-feature model and its preprocessing function.

    ``weights="random"`` skips the pretrained download (feature dimensions
    and timing are weight-independent, accuracy is not).
    """
    import tensorflow as tf

    spec = get_spec(tag)
    applications = tf.keras.applications
    kwargs = {"include_top": False, "pooling": "avg",
              "weights": None if weights == "random" else weights,
              "input_shape": (spec.input_size, spec.input_size, 3)}
    model = getattr(applications, spec.model_name)(**kwargs)
    preprocess = getattr(applications, spec.module_name).preprocess_input
    out_dim = int(model.output_shape[-1])
    if out_dim != spec.feature_dim:
        raise RuntimeError(
            f"{tag}: model produces {out_dim}-dim features, registry declares "
            f"{spec.feature_dim}")
    return model, preprocess, spec
