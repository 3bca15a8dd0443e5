import os
import json
import logging
logging.basicConfig(level=logging.INFO, force=True)
logger = logging.getLogger(__name__)


class SettingProperty:
    """
    Descriptor for setting properties that notify listeners when changed.

    Settings are accessed like normal attributes (settings.max_iterations)
    while changes are logged and forwarded to every connected callback. An
    optional environment variable overrides the default when the Settings
    instance is created.
    """
    def __init__(self, default_value, category: str = "General",
                 env: str | None = None):
        self.name = None  # Will be set when the class is created
        self.default_value = default_value
        self.category = category
        self.env = env

    def __set_name__(self, owner, name):
        """Called when the descriptor is assigned to a class attribute"""
        self.name = name

    def __get__(self, instance, owner):
        """
        Called when the attribute is accessed (settings.max_iterations)

        Args:
            instance: The Settings instance (or None if accessed from the class)
            owner: The Settings class

        Returns:
            The actual setting value (not the descriptor)
        """
        if instance is None:
            return self
        return instance._values.get(self.name, self.default_value)

    def __set__(self, instance, value):
        """Called when the attribute is set (settings.max_iterations = 500)"""
        old_value = self.__get__(instance, type(instance))
        if old_value != value:
            instance._values[self.name] = value
            logger.info(f"Setting changed: {self.name} = {value} (was {old_value})")
            instance._notify(self.name, value)


def _cast_like(default, value):
    """Converts a string value to the type of the default value."""
    if isinstance(default, bool):
        return value.strip().lower() in ('1', 'true', 'yes', 'on')
    if isinstance(default, int):
        return int(value)
    if isinstance(default, float):
        return float(value)
    return value


class Settings:
    """Process-wide settings with change notification and environment
    overrides.
    """

    def __init__(self):
        self._values = {}
        self._listeners = []
        logger.info("Initializing Settings manager")
        self._load_environment()

    # Classification
    max_iterations = SettingProperty(10000, "Classification", env='PALIN_MAX_ITER')

    # Construction
    unit_search_bound = SettingProperty(10, "Construction", env='PALIN_UNIT_BOUND')
    max_workers = SettingProperty(1, "Construction", env='PALIN_MAX_WORKERS')
    prime_search_cap = SettingProperty(100000, "Construction")

    # Numerics
    refinement_cap = SettingProperty(256, "Numerics")

    # Output
    log_level = SettingProperty('WARNING', "Output", env='PALIN_LOG_LEVEL')
    json_indent = SettingProperty(2, "Output")

    def connect(self, callback):
        """Registers callback(name, value), called whenever a setting changes."""
        self._listeners.append(callback)

    def disconnect(self, callback):
        if callback in self._listeners:
            self._listeners.remove(callback)

    def _notify(self, name, value):
        for callback in list(self._listeners):
            callback(name, value)

    def _load_environment(self):
        """Load overrides from environment variables"""
        loaded_count = 0
        for setting_name in self.get_all_setting_names():
            prop = getattr(type(self), setting_name)
            if prop.env is None or prop.env not in os.environ:
                continue
            raw = os.environ[prop.env]
            try:
                value = _cast_like(prop.default_value, raw)
            except (ValueError, TypeError):
                logger.warning(f"Failed to convert {prop.env}={raw!r} for setting '{setting_name}'; using default")
                continue
            self._values[setting_name] = value
            loaded_count += 1
            logger.info(f"Loaded setting from {prop.env}: {setting_name} = {value}")
        logger.info(f"Loaded {loaded_count} settings from the environment")

    def reset_to_defaults(self):
        """Reset all settings to their default values"""
        logger.info("Resetting all settings to defaults")
        self._values.clear()
        for setting_name in self.get_all_setting_names():
            default_value = getattr(type(self), setting_name).default_value
            self._notify(setting_name, default_value)

    def get_all_setting_names(self) -> list[str]:
        """Get a list of all setting names"""
        return [name for name, attr in vars(type(self)).items()
                if isinstance(attr, SettingProperty)]

    def get_settings_by_category(self) -> dict[str, list[str]]:
        """Get a dictionary of settings grouped by category"""
        result = {}
        for name, attr in vars(type(self)).items():
            if isinstance(attr, SettingProperty):
                result.setdefault(attr.category, []).append(name)
        return result

    def __iter__(self):
        """Iterate over all settings"""
        for name in self.get_all_setting_names():
            yield name, getattr(self, name)

    def __str__(self):
        return json.dumps({name: value for name, value in self})


# Create the singleton instance
settings = Settings()
