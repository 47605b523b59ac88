"""Setup script for the Euler fraction workbench"""
import importlib.util
import json
import sys
from pathlib import Path

REQUIRED_MODULES = ["mpmath", "numpy", "pandas", "openpyxl", "pydantic", "dotenv", "rich", "jsonschema"]

SAMPLE_SCHEME = {
    "label": "brouncker_tail",
    "f": {"p": "-1", "q": "2"},
    "g": {"p": "2", "q": "0"},
    "h": {"p": "1", "q": "2"},
    "seed_note": "shifted arc-tangent rows of the α=β=1 member"
}


def missing_modules() -> list:
    return [name for name in REQUIRED_MODULES if importlib.util.find_spec(name) is None]


def check_schemes(scheme_dir: Path) -> bool:
    """Load every scheme file and build its first element"""
    from core.continued_fraction import ContinuedFractionError
    from core.recurrence import RecurrenceError, cf_from_recurrence, load_scheme_file

    ok = True
    for path in sorted(scheme_dir.glob("*.json")):
        try:
            cf_from_recurrence(load_scheme_file(path)).elements(1)
            print(f"✓ Scheme file loads: {path.name}")
        except (RecurrenceError, ContinuedFractionError) as e:
            print(f"❌ {e}")
            ok = False
    return ok


def setup_project(root: Path = Path(".")) -> bool:
    """Set up the project environment under `root`"""
    print("🔧 Setting up Euler fraction workbench...")

    if sys.version_info < (3, 10):
        print("❌ Python 3.10+ required")
        return False
    print(f"✓ Python version: {sys.version.split()[0]}")

    missing = missing_modules()
    if missing:
        print(f"❌ Missing packages: {', '.join(missing)}")
        print("   pip install -r requirements.txt")
        return False
    print("✓ Dependencies importable")

    for dir_path in ("data/results", "data/logs", "data/schemes"):
        (root / dir_path).mkdir(parents=True, exist_ok=True)
        print(f"✓ Created directory: {dir_path}")

    sample = root / "data/schemes/brouncker_tail.json"
    if not sample.exists():
        sample.write_text(json.dumps(SAMPLE_SCHEME, ensure_ascii=False, indent=2) + "\n", encoding="utf-8")
        print(f"✓ Wrote sample scheme: {sample}")

    if not check_schemes(root / "data/schemes"):
        return False

    if not (root / ".env").exists():
        print("ℹ️  No .env file found; defaults apply (CF_PRECISION=50, CF_WORKERS=1).")
        print("   cp .env.example .env  to override them")
    else:
        from dotenv import load_dotenv
        from pydantic import ValidationError

        from config.settings import Settings

        load_dotenv(root / ".env", override=True)
        try:
            settings = Settings.load_from_env()
        except ValidationError as e:
            print(f"❌ Invalid settings in .env: {e}")
            return False
        print(f"✓ .env loads: {settings.precision.digits} digits, {settings.runtime.workers} worker(s)")

    print("\n🚀 Setup complete!")
    print("\nNext steps:")
    print("1. List the identities: python main.py list")
    print("2. Check them all: python main.py verify all")
    print("3. Evaluate the sample scheme: python main.py eval --scheme data/schemes/brouncker_tail.json")

    return True


if __name__ == "__main__":
    sys.exit(0 if setup_project() else 1)
