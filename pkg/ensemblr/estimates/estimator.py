"""Feed-forward estimator in numpy.

One hidden ReLU layer, then a sigmoid (binary), softmax (categorical) or
identity (regression) output, trained on binary cross-entropy, categorical
cross-entropy or squared error. Inputs are standardized on the columns the
estimate marks continuous, with statistics frozen at first training.
"""

from enum import Enum
from typing import Dict, Optional, Tuple

import numpy as np

from ensemblr.estimates.estimate import OutputKind, ValueEstimate
from ensemblr.utils.errors import ContractError

PARAMS = ("w1", "b1", "w2", "b2")


class EstimatorKind(Enum):
    FEED_FORWARD_BINARY = "feedForwardBinary"
    FEED_FORWARD_CATEGORICAL = "feedForwardCategorical"
    FEED_FORWARD_REGRESSION = "feedForwardRegression"

    @classmethod
    def for_output(cls, kind: OutputKind) -> "EstimatorKind":
        return {
            OutputKind.BINARY: cls.FEED_FORWARD_BINARY,
            OutputKind.CATEGORICAL: cls.FEED_FORWARD_CATEGORICAL,
            OutputKind.CONTINUOUS: cls.FEED_FORWARD_REGRESSION,
        }[kind]


def relu(z: np.ndarray) -> np.ndarray:
    return np.maximum(z, 0.0)


def sigmoid(z: np.ndarray) -> np.ndarray:
    return np.exp(-np.logaddexp(0.0, -z))


def softmax(z: np.ndarray) -> np.ndarray:
    shifted = z - z.max(axis=1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=1, keepdims=True)


class Estimator:
    """Trained model of a value estimate.

    Args:
        kind: Output head and loss
        input_width: Columns of the input matrix, encoded offset included
        hidden_units: Width of the hidden layer
        outputs: Classes for categorical models, 1 otherwise
        seed: Seed of the He-initialized weights
        scaling_mask: Columns to standardize, none by default
    """

    def __init__(
        self,
        kind: EstimatorKind,
        input_width: int,
        hidden_units: int = 16,
        outputs: int = 1,
        seed: int = 0,
        scaling_mask: Optional[np.ndarray] = None,
    ) -> None:
        if input_width < 1 or hidden_units < 1 or outputs < 1:
            raise ContractError("Estimator dimensions must be positive")
        if kind is EstimatorKind.FEED_FORWARD_CATEGORICAL and outputs < 2:
            raise ContractError("Categorical estimators need at least two outputs")
        rng = np.random.default_rng(seed)
        self.kind = kind
        self.input_width = input_width
        self.hidden_units = hidden_units
        self.outputs = outputs
        self.w1 = rng.normal(0.0, np.sqrt(2.0 / input_width), size=(input_width, hidden_units))
        self.b1 = np.zeros(hidden_units)
        self.w2 = rng.normal(0.0, np.sqrt(2.0 / hidden_units), size=(hidden_units, outputs))
        self.b2 = np.zeros(outputs)
        mask = np.zeros(input_width, dtype=bool) if scaling_mask is None else np.asarray(scaling_mask, dtype=bool)
        if mask.shape != (input_width,):
            raise ContractError("Scaling mask does not match the input width")
        self.scaling_mask = mask
        self.mean: Optional[np.ndarray] = None
        self.spread: Optional[np.ndarray] = None
        self.fitted = False

    @classmethod
    def for_estimate(cls, estimate: ValueEstimate, hidden_units: int = 16, seed: int = 0) -> "Estimator":
        return cls(
            EstimatorKind.for_output(estimate.output.kind),
            estimate.input_width,
            hidden_units=hidden_units,
            outputs=estimate.output.size,
            seed=seed,
            scaling_mask=estimate.scaling_mask,
        )

    def __repr__(self) -> str:
        return (
            f"Estimator({self.kind.value}, {self.input_width}x{self.hidden_units}x{self.outputs}, "
            f"fitted={self.fitted})"
        )

    @property
    def params(self) -> Dict[str, np.ndarray]:
        return {name: getattr(self, name) for name in PARAMS}

    def set_params(self, params: Dict[str, np.ndarray]) -> None:
        for name in PARAMS:
            value = np.asarray(params[name], dtype=float)
            if value.shape != getattr(self, name).shape:
                raise ContractError(f"Parameter {name} has shape {value.shape}")
            setattr(self, name, value.copy())

    def copy(self) -> "Estimator":
        clone = Estimator.__new__(Estimator)
        clone.__dict__.update(
            {k: (v.copy() if isinstance(v, np.ndarray) else v) for k, v in self.__dict__.items()}
        )
        return clone

    def freeze_scaling(self, x: np.ndarray) -> None:
        """Compute standardization statistics once; later calls keep them."""
        if self.mean is not None:
            return
        mean = np.zeros(self.input_width)
        spread = np.ones(self.input_width)
        if self.scaling_mask.any() and len(x):
            columns = np.asarray(x[:, self.scaling_mask], dtype=float)
            mean[self.scaling_mask] = columns.mean(axis=0)
            std = columns.std(axis=0)
            spread[self.scaling_mask] = np.where(std > 0, std, 1.0)
        self.mean = mean
        self.spread = spread

    def scale(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.ndim != 2 or x.shape[1] != self.input_width:
            raise ContractError(f"Expected inputs of shape (n, {self.input_width}), got {x.shape}")
        if self.mean is None:
            return x
        return (x - self.mean) / self.spread

    def _forward(self, xs: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        z1 = xs @ self.w1 + self.b1
        a1 = relu(z1)
        z2 = a1 @ self.w2 + self.b2
        return z1, a1, z2

    def _activate(self, z2: np.ndarray) -> np.ndarray:
        if self.kind is EstimatorKind.FEED_FORWARD_BINARY:
            return sigmoid(z2[:, 0])
        if self.kind is EstimatorKind.FEED_FORWARD_CATEGORICAL:
            return softmax(z2)
        return z2[:, 0]

    def predict(self, x: np.ndarray) -> np.ndarray:
        """Probabilities (binary), distributions (categorical) or values (regression)."""
        _, _, z2 = self._forward(self.scale(x))
        return self._activate(z2)

    def _loss(self, z2: np.ndarray, y: np.ndarray) -> Tuple[float, np.ndarray]:
        """Mean loss and its gradient with respect to the output pre-activation."""
        n = len(y)
        if self.kind is EstimatorKind.FEED_FORWARD_BINARY:
            z = z2[:, 0]
            loss = float(np.mean(np.logaddexp(0.0, z) - y * z))
            dz = ((sigmoid(z) - y) / n)[:, None]
        elif self.kind is EstimatorKind.FEED_FORWARD_CATEGORICAL:
            shifted = z2 - z2.max(axis=1, keepdims=True)
            log_p = shifted - np.log(np.exp(shifted).sum(axis=1, keepdims=True))
            classes = y.astype(int)
            loss = float(-np.mean(log_p[np.arange(n), classes]))
            dz = np.exp(log_p)
            dz[np.arange(n), classes] -= 1.0
            dz /= n
        else:
            diff = z2[:, 0] - y
            loss = float(np.mean(diff ** 2))
            dz = (2.0 * diff / n)[:, None]
        return loss, dz

    def loss(self, x: np.ndarray, y: np.ndarray) -> float:
        _, _, z2 = self._forward(self.scale(x))
        return self._loss(z2, np.asarray(y, dtype=float))[0]

    def loss_and_gradients(self, xs: np.ndarray, y: np.ndarray) -> Tuple[float, Dict[str, np.ndarray]]:
        """Loss and analytic gradients on already scaled inputs."""
        z1, a1, z2 = self._forward(xs)
        loss, dz2 = self._loss(z2, y)
        dw2 = a1.T @ dz2
        db2 = dz2.sum(axis=0)
        dz1 = (dz2 @ self.w2.T) * (z1 > 0)
        dw1 = xs.T @ dz1
        db1 = dz1.sum(axis=0)
        return loss, {"w1": dw1, "b1": db1, "w2": dw2, "b2": db2}

    def step(self, grads: Dict[str, np.ndarray], learning_rate: float) -> None:
        for name in PARAMS:
            setattr(self, name, getattr(self, name) - learning_rate * grads[name])
