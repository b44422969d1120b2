#!/usr/bin/env python3
"""
Setup script for the wave-shape neuron workbench.
This script installs dependencies and sets up the environment.
"""

import argparse
import importlib.util
import os
import subprocess
import sys
from pathlib import Path

PLAYSPORT = """sun,daylight,wind,rain,output:play_sport
High,High,Low,Low,High
Low,Low,High,High,Low
"""

RUNTIME_MODULES = ("numpy", "pandas", "pydantic", "dotenv", "streamlit")


def create_env_file():
    """Create a .env file if it doesn't exist."""
    env_path = Path(".env")

    if not env_path.exists():
        print("Creating .env file with template values...")
        with open(env_path, "w") as f:
            f.write("""# Worker threads for partition scoring (0 = one per CPU)
WAVESHAPE_THREADS=0

# Log level for stderr (DEBUG, INFO, WARNING, ERROR)
WAVESHAPE_LOG_LEVEL=WARNING

# Where the example datasets live
# WAVESHAPE_DATA_DIR=data
""")
        print("Created .env file.")
    else:
        print(".env file already exists.")


def missing_modules():
    """Runtime modules that cannot be imported."""
    return [name for name in RUNTIME_MODULES if importlib.util.find_spec(name) is None]


def install_dependencies():
    """Install everything in requirements.txt."""
    try:
        subprocess.check_call([sys.executable, "-m", "pip", "install", "-r", "requirements.txt"])
        print("Dependencies installed successfully.")
    except subprocess.CalledProcessError:
        print("Failed to install dependencies from requirements.txt.")


def create_data():
    """Create the data directory and the Play Sport example."""
    os.makedirs("data", exist_ok=True)
    sample_file = Path("data") / "playsport.csv"
    if not sample_file.exists():
        sample_file.write_text(PLAYSPORT, encoding="utf-8")
        print(f"Created example dataset: {sample_file}")
    else:
        print("Example dataset already exists.")


def parse_args():
    """Parse command line arguments."""
    parser = argparse.ArgumentParser(description="Setup script for the wave-shape neuron workbench")
    parser.add_argument("--skip-install", action="store_true", help="Skip dependency installation")
    parser.add_argument("--run", action="store_true", help="Run the workbench after setup")
    return parser.parse_args()


def main():
    """Main function."""
    args = parse_args()

    print("Setting up the wave-shape neuron workbench...")

    create_data()
    create_env_file()

    if not args.skip_install:
        missing = missing_modules()
        if missing:
            print(f"Missing modules: {', '.join(missing)}")
            install_dependencies()
        else:
            print("All dependencies are already installed.")

    print("\nSetup complete!")
    print("\nTo run the command line tool:")
    print("  python3 run.py train --data data/playsport.csv --pretty")
    print("\nTo run the workbench UI:")
    print("  python3 run_streamlit.py")

    # Run the app if requested
    if args.run:
        print("\nStarting the workbench...")
        subprocess.call([sys.executable, "run_streamlit.py"])


if __name__ == "__main__":
    main()
