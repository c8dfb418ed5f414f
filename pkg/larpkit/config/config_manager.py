"""Configuration manager for planners, decomposition and the scenario harness."""
import copy
import math
import os
import yaml
from typing import Dict, Any
from pathlib import Path


PLANNER_NAMES = ["PM", "APF", "APF*", "M-APF", "Larp"]


class ConfigManager:
    """Manages configuration for the planning toolkit."""

    def __init__(self, config_path: str = None):
        """
        Initialize configuration manager.

        Args:
            config_path: Path to configuration file. If None, uses default.
        """
        if config_path is None:
            config_path = os.path.join(
                Path(__file__).parent.parent.parent, "config.yaml"
            )
        self.config_path = config_path
        self.config = self._load_config()

    def _load_config(self) -> Dict[str, Any]:
        """Load configuration from YAML file."""
        if not os.path.exists(self.config_path):
            return self._get_default_config()

        with open(self.config_path, 'r') as f:
            config = yaml.safe_load(f)
        return config or self._get_default_config()

    def _get_default_config(self) -> Dict[str, Any]:
        """Return default configuration."""
        return copy.deepcopy({
            "decomposition": {
                # scaled squared distances where the potential crosses
                # 0.9, 0.7, 0.5, 0.25 and 0.05
                "boundaries": [0.105, 0.357, 0.693, 1.386, 2.996],
                "n_min_fraction": 1 / 64,
                "n_max_fraction": 1 / 8,
                "max_depth": 32
            },
            "search": {
                "beta": 5.0,
                "corner_adjacency": False,
                "zone_block_threshold": None,
                "cost_model": "integrated"
            },
            "planners": {
                "defaults": {
                    "zeta": 1.0,
                    "eta": 1.0,
                    "step_size": 0.1,
                    "repulsion_distance": 5.0,
                    "attraction_distance": 5.0,
                    "m": 2.0,
                    "max_iters": 5000,
                    "goal_snap_radius": math.sqrt(2.5)
                }
            },
            "metrics": {
                "max_step": 0.05,
                "goal_tolerance_sq": 2.5,
                "safety_threshold": 0.35
            },
            "plotting": {
                "resolution": 256,
                "colormap": "magma"
            },
            "comparison": {
                "n_jobs": 1,
                "planners": list(PLANNER_NAMES)
            },
            "logging": {
                "level": "INFO",
                "format": "%(asctime)s - %(name)s - %(levelname)s - %(message)s",
                "file": "logs/larpkit.log"
            }
        })

    def get(self, key: str, default: Any = None) -> Any:
        """
        Get configuration value by key (supports nested keys with dots).

        Args:
            key: Configuration key (e.g., 'search.beta')
            default: Default value if key not found

        Returns:
            Configuration value
        """
        keys = key.split('.')
        value = self.config

        for k in keys:
            if isinstance(value, dict) and k in value:
                value = value[k]
            else:
                return default

        return value

    def planner_settings(self, planner: str) -> Dict[str, Any]:
        """
        Merged hyperparameters for one planner: shared defaults, then the
        planner's own section.

        Args:
            planner: Planner name (PM, APF, APF*, M-APF)

        Returns:
            Dictionary of PlannerParams keyword arguments
        """
        merged = dict(self.get('planners.defaults', {}) or {})
        merged.update(self.get(f'planners.{planner}', {}) or {})
        return merged

    def save_config(self, config_path: str = None):
        """Save current configuration to file."""
        if config_path is None:
            config_path = self.config_path

        config_dir = os.path.dirname(config_path)
        if config_dir:
            os.makedirs(config_dir, exist_ok=True)
        with open(config_path, 'w') as f:
            yaml.dump(self.config, f, default_flow_style=False)
