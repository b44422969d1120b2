"""Wave-shape artificial neuron and a delta-rule baseline to compare it with."""

__version__ = "0.1.0"
