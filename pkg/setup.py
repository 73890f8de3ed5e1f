from setuptools import setup, find_packages

setup(
    name='rq-solve',
    version='0.1.0',
    description='Satisfiability solver for restricted quantifiers over finite sets',
    packages=find_packages(include=['algorithm', 'analysis', 'config', 'models', 'ui']),
    py_modules=['main'],
    python_requires='>=3.8',
    install_requires=['numpy>=1.24', 'scipy>=1.10', 'lark>=1.1'],
    entry_points={'console_scripts': ['rq-solve=main:main']},
)
