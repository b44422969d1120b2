# waveshape/models/persistence.py
import logging
import os
from typing import Annotated, Union

from pydantic import Field, TypeAdapter, ValidationError

from ..exceptions import DataError
from . import baseline, neuron
from .baseline import BaselineModel
from .neuron import WaveShapeModel
from .schemas import BaselineDocument, WaveShapeDocument

logger = logging.getLogger(__name__)

ModelDocument = Annotated[Union[WaveShapeDocument, BaselineDocument], Field(discriminator="kind")]
_DOCUMENT_ADAPTER = TypeAdapter(ModelDocument)

AnyModel = Union[WaveShapeModel, BaselineModel]


def dump_model(model: AnyModel) -> str:
    """JSON document for either model kind."""
    if isinstance(model, WaveShapeModel):
        return neuron.to_document(model).model_dump_json()
    return baseline.to_document(model).model_dump_json()


def parse_model(text: str) -> AnyModel:
    try:
        document = _DOCUMENT_ADAPTER.validate_json(text)
    except ValidationError as e:
        raise DataError(f"not a model document: {e}")
    if isinstance(document, WaveShapeDocument):
        return neuron.from_document(document)
    return baseline.from_document(document)


def save_model(model: AnyModel, path: Union[str, os.PathLike]) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(dump_model(model))
        f.write("\n")
    logger.info("Saved model to %s", path)


def load_model(path: Union[str, os.PathLike]) -> AnyModel:
    with open(path, "r", encoding="utf-8") as f:
        return parse_model(f.read())
