import json
import os

from pydantic import BaseModel

from excmine import logger


class ExcmineParams(BaseModel):
    class Config:
        validate_assignment = True

    @classmethod
    def from_json_file(cls, path: str):
        with open(path, encoding="utf-8") as f:
            return cls(**json.load(f))

    def to_metadata(self) -> dict:
        """Plain JSON-compatible view of the params, as recorded in model files."""
        return json.loads(self.json())

    def save(self, output_dir):
        os.makedirs(output_dir, exist_ok=True)
        path = os.path.join(output_dir, "training_params.json")
        with open(path, "w", encoding="utf-8") as f:
            f.write(self.json(indent=4, sort_keys=True))

    def __init__(self, **data):
        super().__init__(**data)

        # Parameters not supplied by the user
        defaults = {f.name for f in self.__fields__.values() if f.default == self.__dict__[f.name]}
        supplied = set(data.keys())
        not_supplied = defaults - supplied
        if not_supplied:
            logger.debug(f"Parameters not supplied by user and set to default: {', '.join(sorted(not_supplied))}")

        unused = supplied - set(self.__fields__)
        if unused:
            logger.warning(f"Parameters supplied but not used: {', '.join(sorted(unused))}")
