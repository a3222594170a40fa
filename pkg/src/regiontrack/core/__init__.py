"""核心组件：配置、异常、引擎注册表、比较与精化驱动"""
