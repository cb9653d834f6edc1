import setuptools

with open('requirements.txt') as f:
    required = f.read().splitlines()

setuptools.setup(
    name='dynsym_entanglement',
    version='0.1',
    description='Total variance, completely entangled states, SLOCC measures and '
                'cavity stabilization of entanglement relative to a dynamic symmetry',
    packages=setuptools.find_packages(exclude=['tests']),
    include_package_data=True,
    package_data={'dynsym_entanglement': ['config.ini']},
    install_requires=required,
    extras_require={'test': ['pytest']},
    entry_points={
          'console_scripts': [
              'dynsym_entanglement = dynsym_entanglement.__main__:main'
          ]
      },
      )
