import argparse

from src.config import settings
from src.utils.io import read_lengths_csv, write_metrics_csv
from src.utils.metrics import compare_lengths


def register(subparsers, parents) -> None:
    parser = subparsers.add_parser("eval", parents=parents, help="Compare length histograms")
    parser.add_argument("--pred", required=True, help="Predicted lengths CSV")
    parser.add_argument("--gt", required=True, help="Ground-truth lengths CSV")
    parser.add_argument("--lo", type=float, default=settings.HIST_LO, help="Histogram low edge, mm")
    parser.add_argument("--hi", type=float, default=settings.HIST_HI, help="Histogram high edge, mm")
    parser.add_argument("--bins", type=int, default=settings.HIST_BINS, help="Number of bins")
    parser.add_argument("--out", required=True, help="Metrics CSV")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    metrics = compare_lengths(read_lengths_csv(args.pred), read_lengths_csv(args.gt), args.lo, args.hi, args.bins)
    write_metrics_csv(args.out, metrics)
    return 0
