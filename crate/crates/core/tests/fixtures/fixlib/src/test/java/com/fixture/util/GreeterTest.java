package com.fixture.util;

import org.junit.Test;
import static org.junit.Assert.*;

public class GreeterTest {
    @Test
    public void testGreet() {
        Greeter greeter = new Greeter();
        assertEquals("Hello, World!", greeter.greet("World"));
    }

    @Test
    public void testFind() {
        Greeter greeter = new Greeter();
        assertEquals("Hello", greeter.find("greeting"));
        assertNull(greeter.find("other"));
    }

    @Test
    public void shouldHandleMissing() {
        Greeter greeter = new Greeter();
        assertNull(greeter.find("nope"));
    }
}
