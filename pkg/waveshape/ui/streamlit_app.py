import os
import sys

import pandas as pd
import streamlit as st

st.set_page_config(
        page_title="Wave-shape neuron",
        layout="wide"
    )

# Fix import path issues when launched with `streamlit run`
current_dir = os.path.dirname(os.path.abspath(__file__))
project_root = os.path.dirname(os.path.dirname(current_dir))
if project_root not in sys.path:
    sys.path.insert(0, project_root)

from waveshape.main import get_workbench
from waveshape.models.schemas import GroupingConfig, LMSConfig
from waveshape.utils import config


def _error_table(reports):
    rows = {name: {"mae": r.mae, "mse": r.mse, "shape_error": r.shape_error} for name, r in reports.items()}
    return pd.DataFrame.from_dict(rows, orient="index")


def main():
    # Initialize session state
    if "workbench" not in st.session_state:
        st.session_state.workbench = get_workbench()
        st.session_state.workbench.load(config.PLAYSPORT_CSV)
    bench = st.session_state.workbench

    st.title("Wave-shape neuron")
    st.subheader("Group inputs by shape, fit one weight per group, compare with LMS")

    # Sidebar for data and settings
    with st.sidebar:
        st.header("Dataset")
        uploaded_file = st.file_uploader("Upload a CSV (one 'output:' column)", type="csv")
        if uploaded_file is not None and st.button("Load CSV"):
            if bench.load(uploaded_file):
                st.success(f"Loaded {uploaded_file.name}")
            else:
                st.error(bench.last_error)
        if st.button("Use Play Sport example"):
            bench.load(config.PLAYSPORT_CSV)

        st.header("Grouping")
        combine_mode = st.selectbox("Combine mode", ["sum", "mean"])
        search = st.selectbox("Search", ["auto", "exhaustive", "greedy"])
        allow_drop = st.checkbox("Allow dropping inputs")
        sign_aware = st.checkbox("Sign-aware matching", value=True)

        st.header("Baseline (LMS)")
        learning_rate = st.number_input("Learning rate", min_value=1e-6, value=config.DEFAULT_LEARNING_RATE, format="%.4f")
        epochs = st.number_input("Epochs", min_value=1, value=config.DEFAULT_EPOCHS)
        batch = st.checkbox("Batch updates")
        seed = st.number_input("Seed", value=config.DEFAULT_SEED, step=1)
        holdout = st.slider("Holdout fraction", 0.0, 0.9, config.DEFAULT_HOLDOUT)

    if bench.dataset is None:
        st.info("Load a dataset to begin.")
        return

    dataset = bench.dataset
    frame = pd.DataFrame(dataset.inputs, columns=list(dataset.input_names))
    frame[f"output:{dataset.output_name}"] = dataset.targets
    st.dataframe(frame)

    grouping = GroupingConfig(combine_mode=combine_mode, search=search, allow_drop=allow_drop, sign_aware=sign_aware)
    lms = LMSConfig(learning_rate=learning_rate, epochs=int(epochs), batch=batch, seed=int(seed))

    if st.button("Train and compare"):
        with st.spinner("Training..."):
            comparison = bench.compare(grouping, lms, holdout, int(seed))
        if comparison is None:
            st.error(bench.last_error)
        else:
            left, right = st.columns(2)
            with left:
                st.markdown("**Wave-shape synapses**")
                wave = comparison.waveshape
                st.table(pd.DataFrame({
                    "group": [", ".join(dataset.input_names[i] for i in s.group.input_indices) for s in wave.synapses],
                    "weight": [s.weight for s in wave.synapses],
                    "signal mean": [s.signal_mean for s in wave.synapses],
                }))
            with right:
                st.markdown("**Baseline weights**")
                st.table(pd.DataFrame({
                    "input": list(dataset.input_names) + ["bias"],
                    "weight": list(comparison.baseline.weights) + [comparison.baseline.bias],
                }))
            st.markdown("**Errors**")
            st.table(_error_table(comparison.reports))

    if bench.waveshape is not None or bench.baseline is not None:
        st.header("Predict")
        values = [
            st.number_input(name, value=0.5, key=f"input_{name}") for name in dataset.input_names
        ]
        st.json(bench.predict(values))


if __name__ == "__main__":
    main()
