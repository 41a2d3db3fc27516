""" JSON configuration files of the sweep and personalize-demo commands.
    Parsing is strict: unknown keys are errors, missing keys take defaults
    from weak.config.
"""

import json
import logging

from weak.config import *
from weak.enums import *
from weak.errors import *
from weak.confusion import build_validated
from weak.density import DiscretePmf
from weak.experiment import SyntheticConfig
from weak.personalize import PersonalizeConfig

SWEEP = "sweep"
PERSONALIZE = "personalize-demo"

SWEEP_KEYS = ("binomial_trials", "success_params", "class_prior",
              "forward_matrix", "sample_sizes", "noise_levels",
              "runs_per_cell", "base_seed", "smoothing", "projection")
PERSONALIZE_KEYS = ("seeds", "alphabet_size", "emission_noise",
                    "baseline_shift", "baseline_uniform_mix",
                    "baseline_strength", "personalization_samples",
                    "evaluation_samples", "annotator_check_samples",
                    "speed_models", "annotator_confusion", "projection",
                    "smoothing")
KEYS = {SWEEP: SWEEP_KEYS, PERSONALIZE: PERSONALIZE_KEYS}


def _line_of(text, key):
    """ Line number of first occurrence of key in JSON text, or None.
    """
    pos = text.find(json.dumps(key))
    if pos < 0:
        return None
    return text.count("\n", 0, pos) + 1


def _sweep_config(values):
    values = dict(values)
    if values.get("class_prior") is not None:
        values["class_prior"] = DiscretePmf(values["class_prior"])
    if values.get("forward_matrix") is not None:
        values["forward_matrix"] = build_validated(values["forward_matrix"],
                                                   FORWARD)
    if values.get("projection") is not None:
        values["projection"] = from_name(PROJECTIONS, values["projection"])
    return SyntheticConfig(**values)


def _personalize_config(values):
    values = dict(values)
    if values.get("projection") is not None:
        values["projection"] = from_name(PROJECTIONS, values["projection"])
    return PersonalizeConfig(**values)


def build_config(values, subcommand):
    """ Build typed config from dict of values.
    :param values: dict, keys from KEYS[subcommand].
    :param subcommand: SWEEP or PERSONALIZE.
    :return: SyntheticConfig or PersonalizeConfig.
    """
    if subcommand not in KEYS:
        raise ConfigException("no config for command '{}'"
                              .format(subcommand))
    for key in values:
        if key not in KEYS[subcommand]:
            raise ParseError("unknown key '{}'".format(key))
    try:
        if subcommand == SWEEP:
            return _sweep_config(values)
        return _personalize_config(values)
    except (TypeError, ValueError) as e:
        raise ParseError("bad config value: {}".format(e))


def parse_config(path, subcommand):
    """ Read and validate config file. Domain problems, like singular noise
        matrix, are raised as WeakException before any work starts.
    :param path: JSON file path.
    :param subcommand: SWEEP or PERSONALIZE.
    :return: SyntheticConfig or PersonalizeConfig.
    """
    with open(path, "r") as f:
        text = f.read()
    try:
        values = json.loads(text)
    except ValueError as e:
        raise ParseError("{}:{}: {}".format(path, getattr(e, "lineno", "?"),
                                            e))
    if not isinstance(values, dict):
        raise ParseError("{}: JSON object expected at top level"
                         .format(path))
    for key in values:
        if key not in KEYS.get(subcommand, ()):
            raise ParseError("{}:{}: unknown key '{}'"
                             .format(path, _line_of(text, key), key))
    try:
        cfg = build_config(values, subcommand)
    except ParseError as e:
        raise ParseError("{}: {}".format(path, e))
    logging.debug("Config {} loaded".format(path))
    return cfg


def defaults(subcommand):
    """ Default value of every config key.
    """
    if subcommand == SWEEP:
        return SyntheticConfig().to_dict()
    return PersonalizeConfig().to_dict()


def describe_keys(subcommand):
    """ Text for help epilog with every key and its default.
    """
    values = defaults(subcommand)
    lines = ["config keys (JSON object, all optional):"]
    for key in KEYS[subcommand]:
        lines.append("  {:<26} default {}".format(key,
                                                   json.dumps(values[key])))
    return "\n".join(lines)
