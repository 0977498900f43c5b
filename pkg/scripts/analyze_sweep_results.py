from __future__ import annotations

import sys
from pathlib import Path

import pandas as pd
from colorama import Fore, Style, init as colorama_init

colorama_init(autoreset=True)

SWEEPS_DIR = Path("data/sweeps")
OUT_PATH = Path("data/sweeps/sweep_summary.csv")

REQUIRED_COLUMNS = {"index", "size", "rank", "larc", "mismatch"}


def summarize_sweep(csv_path: Path) -> dict:
    """
    Reads one sweep CSV (one row per generator subset) and returns a summary dict.
    """
    df = pd.read_csv(csv_path)

    missing = REQUIRED_COLUMNS - set(df.columns)
    if missing:
        raise ValueError(f"columns {sorted(missing)} not found in {csv_path}")

    controllable = df[df["larc"]]
    min_size = int(controllable["size"].min()) if not controllable.empty else None

    # smallest controllable subsets all share min_size; count them
    at_min = int((controllable["size"] == min_size).sum()) if min_size is not None else 0

    kind, _, n = csv_path.stem.rpartition("_n")
    return {
        "kind": kind,
        "n": int(n) if n.isdigit() else None,
        "csv_file": csv_path.name,
        "subsets": len(df),
        "controllable": len(controllable),
        "max_rank": int(df["rank"].max()),
        "min_controllable_size": min_size,
        "subsets_at_min_size": at_min,
        "mismatches": int(df["mismatch"].sum()),
    }


def size_table(csv_path: Path) -> pd.DataFrame:
    df = pd.read_csv(csv_path)
    return (
        df.groupby("size")
        .agg(subsets=("index", "count"), controllable=("larc", "sum"), mismatches=("mismatch", "sum"))
        .astype(int)
        .reset_index()
    )


def main():
    sweeps_dir = Path(sys.argv[1]) if len(sys.argv) > 1 else SWEEPS_DIR
    if not sweeps_dir.exists():
        print(f"Sweep folder not found: {sweeps_dir}")
        sys.exit(1)

    csv_files = sorted(p for p in sweeps_dir.glob("*_n*.csv") if p.name != OUT_PATH.name)
    if not csv_files:
        print(f"No sweep CSVs found in {sweeps_dir}")
        sys.exit(0)

    print(f"Found {len(csv_files)} sweep CSVs under {sweeps_dir}")

    summaries = []
    for csv_path in csv_files:
        try:
            summaries.append(summarize_sweep(csv_path))
        except Exception as e:
            print(f"Error processing {csv_path.name}: {e}")

    if not summaries:
        print("No readable sweeps.")
        sys.exit(0)

    summary_df = pd.DataFrame(summaries).sort_values(["kind", "n"])

    print("\n=== Sweep Summary ===")
    header = (
        f"{'kind':<12}"
        f"{'n':>4}"
        f"{'subsets':>10}"
        f"{'controllable':>14}"
        f"{'max_rank':>10}"
        f"{'min_size':>10}"
        f"{'at_min':>8}"
        f"{'mismatches':>12}"
    )
    print(header)
    print("-" * len(header))

    for _, row in summary_df.iterrows():
        mismatch_color = Fore.RED if row["mismatches"] else Fore.GREEN
        mismatch_str = f"{mismatch_color}{row['mismatches']:>12}{Style.RESET_ALL}"
        min_size = "-" if pd.isna(row["min_controllable_size"]) else int(row["min_controllable_size"])
        print(
            f"{row['kind']:<12}"
            f"{row['n']:>4}"
            f"{row['subsets']:>10}"
            f"{row['controllable']:>14}"
            f"{row['max_rank']:>10}"
            f"{min_size:>10}"
            f"{row['subsets_at_min_size']:>8}"
            f"{mismatch_str}"
        )

    for csv_path in csv_files:
        print(f"\n--- {csv_path.stem}: subsets by cardinality ---")
        print(size_table(csv_path).to_string(index=False))

    total_mismatches = int(summary_df["mismatches"].sum())
    color = Fore.GREEN if total_mismatches == 0 else Fore.RED
    print(f"\nTotal mismatches: {color}{total_mismatches}{Style.RESET_ALL}")

    OUT_PATH.parent.mkdir(parents=True, exist_ok=True)
    summary_df.to_csv(OUT_PATH, index=False)
    print(f"\nSummary saved to {OUT_PATH}")
    sys.exit(1 if total_mismatches else 0)


if __name__ == "__main__":
    main()
