import logging
from typing import BinaryIO, Dict, Optional, Sequence, Union

from .experiments.runner import Comparison, compare_models
from .models import neuron
from .models.baseline import BaselineModel, predict_baseline
from .models.neuron import WaveShapeModel
from .models.schemas import EncodingMap, GroupingConfig, LMSConfig
from .utils.data import Dataset, load_csv

logger = logging.getLogger(__name__)


class Workbench:
    """Holds a dataset and the models trained on it; used by the UI."""

    def __init__(self):
        self.dataset: Optional[Dataset] = None
        self.waveshape: Optional[WaveShapeModel] = None
        self.baseline: Optional[BaselineModel] = None
        self.last_error: Optional[str] = None

    def _failed(self, action: str, error: Exception) -> None:
        self.last_error = f"Error {action}: {error}"
        logger.exception(self.last_error)

    def load(self, source: Union[str, BinaryIO], encoding: Optional[EncodingMap] = None) -> bool:
        """
        Load a CSV dataset and forget previously trained models.

        Args:
            source: Path or binary stream
            encoding: Categorical token map

        Returns:
            True if successful, False otherwise
        """
        try:
            self.dataset = load_csv(source, encoding)
        except Exception as e:
            self._failed("loading dataset", e)
            return False
        self.waveshape = None
        self.baseline = None
        self.last_error = None
        return True

    def compare(
        self, grouping: GroupingConfig, lms: LMSConfig, holdout: float, seed: int
    ) -> Optional[Comparison]:
        """Train both models on the training split; they are kept for predict."""
        if self.dataset is None:
            self.last_error = "No dataset loaded yet."
            return None
        try:
            comparison = compare_models(self.dataset, grouping, lms, holdout, seed)
        except Exception as e:
            self._failed("comparing models", e)
            return None
        self.waveshape = comparison.waveshape
        self.baseline = comparison.baseline
        return comparison

    def predict(self, inputs: Sequence[float]) -> Dict[str, Optional[float]]:
        """Predictions of whichever models are trained."""
        result: Dict[str, Optional[float]] = {"waveshape": None, "baseline": None}
        try:
            if self.waveshape is not None:
                result["waveshape"] = neuron.predict(self.waveshape, inputs)
            if self.baseline is not None:
                result["baseline"] = predict_baseline(self.baseline, inputs)
        except Exception as e:
            self._failed("predicting", e)
        return result


def get_workbench() -> Workbench:
    return Workbench()
