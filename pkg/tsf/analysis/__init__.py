from .report import ANALYSIS_KINDS, AnalysisReport
from .noise import NOISE_KINDS, attention_log, cmd_noise_study, inject_noise, noise_study
from .edges import cmd_edge_histograms, collect_edges, edge_histograms
from .routes import cmd_route_spectra, magnitude_spectrum, route_band, route_spectra
