from .campaign import (DEFAULT_CONFIG, CampaignResult, ExperimentConfig, evaluate_empirical,
                       run_synthetic_campaign, write_campaign)
from .ingest import IngestSpec, binarize_by_quantile, ingest
from .io import load_edge_list, load_graph, read_records, save_graph, write_records
from .plotdata import aggregate, emit_plot_data

__all__ = [
    "DEFAULT_CONFIG", "CampaignResult", "ExperimentConfig", "IngestSpec", "aggregate",
    "binarize_by_quantile", "emit_plot_data", "evaluate_empirical", "ingest", "load_edge_list",
    "load_graph", "read_records", "run_synthetic_campaign", "save_graph", "write_campaign",
    "write_records",
]
