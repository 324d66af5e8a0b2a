#!/usr/bin/env python3
"""
Setup script for haarint.

This script prepares a working environment: it checks the configuration
file, installs the pinned dependencies, creates the directory of the
configured log file and offers a short sample run.
"""

import sys
import subprocess
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import_ok = True
try:
    import yaml
except ImportError:
    import_ok = False


def check_config(config_path: Union[str, Path] = "config.yaml") -> Dict[str, Any]:
    """Check that the configuration file exists and parses.

    Returns:
        The parsed sections, or an empty dict when the file is missing,
        unreadable or PyYAML is not installed yet.
    """
    config_path = Path(config_path)
    if not config_path.exists():
        print(f"\033[93mWarning: {config_path} not found; built-in defaults will be used.\033[0m")
        return {}
    if not import_ok:
        print(f"PyYAML is not installed yet; {config_path} will be checked on first run.")
        return {}
    try:
        with open(config_path, "r", encoding="utf-8") as f:
            config = yaml.safe_load(f) or {}
    except Exception as e:
        print(f"\033[91mError reading {config_path}: {e}\033[0m")
        return {}
    print(f"✅ {config_path} found with sections: {', '.join(config)}")
    return config


def pinned_packages(requirements_path: Union[str, Path] = "requirements.txt") -> List[str]:
    """Names of the packages pinned in the requirements file, comments skipped."""
    names = []
    for line in Path(requirements_path).read_text(encoding="utf-8").splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            names.append(line.split("==", 1)[0].strip())
    return names


def install_dependencies(requirements_path: Union[str, Path] = "requirements.txt") -> bool:
    """Install the pinned requirements with pip; False when pip fails."""
    packages = pinned_packages(requirements_path)
    print(f"Installing {len(packages)} pinned packages: {', '.join(packages)}")
    try:
        subprocess.check_call([sys.executable, "-m", "pip", "install", "-r", str(requirements_path)])
    except subprocess.CalledProcessError as e:
        print(f"\033[91mpip failed with exit status {e.returncode}\033[0m")
        return False
    print("✅ Dependencies installed.")
    return True


def prepare_log_directory(config: Dict[str, Any]) -> Optional[Path]:
    """Create the directory of ``logging.file``.

    Returns:
        The directory, or None when file logging is off.
    """
    log_file = (config.get("logging") or {}).get("file")
    if not log_file:
        print("File logging is off (logging.file is null); no log directory needed.")
        return None
    log_dir = Path(log_file).parent
    log_dir.mkdir(parents=True, exist_ok=True)
    print(f"✅ Log file will be written to {log_file}")
    return log_dir


def main():
    """Main function to set up the environment."""
    print("\n=== haarint Setup ===")

    config = check_config()

    if not install_dependencies():
        return

    prepare_log_directory(config)

    print("\n=== Setup Complete ===")
    print("\nYou can now evaluate an integral with:")
    print('  python main.py eval "conj: 1,1; 2,2; plain: 1,2; 2,1"')
    print("\nFor more options, run:")
    print("  python main.py --help")

    print("\nWould you like to print the tables up to degree 3? (y/n)")
    choice = input("> ").strip().lower()
    if choice == "y":
        print("\nRunning sample...")
        subprocess.call([sys.executable, "main.py", "tables", "--pmax", "3"])


if __name__ == "__main__":
    if len(sys.argv) > 1:
        # Invoked by a build backend (pip install): metadata lives in pyproject.toml.
        from setuptools import setup

        setup()
    else:
        main()
