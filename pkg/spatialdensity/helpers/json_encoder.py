from json import JSONEncoder

import numpy as np


def convert_numpy_types(obj):
    """Convert numpy types to native Python types"""
    if isinstance(obj, (np.integer,)):
        return int(obj)
    elif isinstance(obj, (np.floating,)):
        return float(obj)
    elif isinstance(obj, (np.bool_,)):
        return bool(obj)
    elif isinstance(obj, (np.ndarray,)):
        return obj.tolist()
    elif isinstance(obj, dict):
        return {key: convert_numpy_types(value) for key, value in obj.items()}
    elif isinstance(obj, list):
        return [convert_numpy_types(item) for item in obj]

    return None


class NumpyJsonEncoder(JSONEncoder):
    def default(self, obj):
        converted = convert_numpy_types(obj)
        if converted is not None:
            return converted

        return super().default(obj)
