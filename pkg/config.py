import os


class Config:
    # Product machines larger than this raise StateBudgetExceeded
    STATE_BUDGET = int(os.environ.get('CAYLEY_STATE_BUDGET') or 10**6)

    # Largest |G|^(n+1) the action oracle will enumerate
    ACTION_BUDGET = int(os.environ.get('CAYLEY_ACTION_BUDGET') or 4 * 10**6)

    # Random word generation
    DEFAULT_SEED = int(os.environ.get('CAYLEY_SEED') or 42)
    WORD_HEIGHT = int(os.environ.get('CAYLEY_WORD_HEIGHT') or 2)
    XVAL_COUNT = 1000
    XVAL_MAX_LEN = 12

    # Report archive
    DATABASE_URL = os.environ.get('DATABASE_URL') or 'sqlite:///./cayley_reports.db'

    # Logging
    LOG_LEVEL = os.environ.get('LOG_LEVEL') or 'WARNING'


class DevelopmentConfig(Config):
    LOG_LEVEL = os.environ.get('LOG_LEVEL') or 'INFO'


class TestingConfig(Config):
    DATABASE_URL = 'sqlite:///:memory:'
    XVAL_COUNT = 200


class ProductionConfig(Config):
    LOG_LEVEL = os.environ.get('LOG_LEVEL') or 'WARNING'


config = {
    'development': DevelopmentConfig,
    'testing': TestingConfig,
    'production': ProductionConfig,
    'default': ProductionConfig
}


def get_config():
    env = os.environ.get('CAYLEY_ENV', 'default')
    return config.get(env, ProductionConfig)
